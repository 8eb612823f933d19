// Copyright 2026 The JRR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Cohort ingestion and synthetic cohorts.

#ifndef JRR_DATASET_H_
#define JRR_DATASET_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "jrr/mechanisms.h"
#include "jrr/random.h"

namespace jrr {

enum class DatasetFormat {
  kBitLines,   // one ASCII 0 or 1 per LF-terminated line
  kCsvColumn,  // header row, values taken from a named column
};

struct DatasetSummary {
  std::string name;
  size_t n = 0;
  size_t n1 = 0;
  double ratio = 0.0;
};

struct Dataset {
  std::vector<Bit> values;
  DatasetSummary summary;
};

inline DatasetSummary Summarize(std::string name, std::span<const Bit> values) {
  DatasetSummary summary;
  summary.name = std::move(name);
  summary.n = values.size();
  summary.n1 = static_cast<size_t>(std::count(values.begin(), values.end(), Bit{1}));
  summary.ratio = summary.n == 0 ? 0.0
                                 : static_cast<double>(summary.n1) /
                                       static_cast<double>(summary.n);
  return summary;
}

namespace internal {

inline absl::StatusOr<Bit> ParseBitField(absl::string_view field, absl::string_view path,
                                         size_t line) {
  if (field == "0") return Bit{0};
  if (field == "1") return Bit{1};
  return absl::InvalidArgumentError(absl::StrCat(path, ":", line, ": expected 0 or 1, got '",
                                                 field, "'"));
}

inline absl::string_view Unquote(absl::string_view field) {
  field = absl::StripAsciiWhitespace(field);
  if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
    field = field.substr(1, field.size() - 2);
  }
  return field;
}

}  // namespace internal

// Parses a cohort from text. `source` is only used in error messages.
inline absl::StatusOr<std::vector<Bit>> ParseDataset(absl::string_view text,
                                                     DatasetFormat format,
                                                     absl::string_view column = "",
                                                     absl::string_view source = "<input>") {
  std::vector<absl::string_view> lines = absl::StrSplit(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::vector<Bit> values;
  if (format == DatasetFormat::kBitLines) {
    values.reserve(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
      auto bit = internal::ParseBitField(lines[i], source, i + 1);
      if (!bit.ok()) return bit.status();
      values.push_back(*bit);
    }
  } else {
    if (lines.empty()) return absl::InvalidArgumentError(absl::StrCat(source, ": empty file"));
    if (column.empty()) return absl::InvalidArgumentError("csv-column format needs a column name");
    absl::string_view header_line = absl::StripSuffix(lines[0], "\r");
    std::vector<absl::string_view> header = absl::StrSplit(header_line, ',');
    size_t index = header.size();
    for (size_t c = 0; c < header.size(); ++c) {
      if (internal::Unquote(header[c]) == column) {
        index = c;
        break;
      }
    }
    if (index == header.size()) {
      return absl::NotFoundError(absl::StrCat(source, ":1: no column named '", column, "'"));
    }
    values.reserve(lines.size() - 1);
    for (size_t i = 1; i < lines.size(); ++i) {
      std::vector<absl::string_view> fields =
          absl::StrSplit(absl::StripSuffix(lines[i], "\r"), ',');
      if (fields.size() <= index) {
        return absl::InvalidArgumentError(
            absl::StrCat(source, ":", i + 1, ": row has no field ", index + 1));
      }
      auto bit = internal::ParseBitField(internal::Unquote(fields[index]), source, i + 1);
      if (!bit.ok()) return bit.status();
      values.push_back(*bit);
    }
  }
  if (values.empty()) return absl::InvalidArgumentError(absl::StrCat(source, ": empty file"));
  return values;
}

inline absl::StatusOr<Dataset> LoadDataset(const std::string& path, DatasetFormat format,
                                           absl::string_view column = "") {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto values = ParseDataset(buffer.str(), format, column, path);
  if (!values.ok()) return values.status();
  Dataset dataset;
  dataset.summary = Summarize(std::filesystem::path(path).stem().string(), *values);
  dataset.values = *std::move(values);
  return dataset;
}

// Exactly n1 ones among n values, placed by a seeded shuffle.
inline absl::StatusOr<std::vector<Bit>> Synthesize(size_t n, size_t n1, uint64_t seed) {
  if (n1 > n) {
    return absl::InvalidArgumentError(absl::StrCat("n1=", n1, " exceeds n=", n));
  }
  std::vector<Bit> values(n, 0);
  std::fill_n(values.begin(), n1, Bit{1});
  Rng rng = MakeRng(seed);
  std::shuffle(values.begin(), values.end(), rng);
  return values;
}

inline std::string FormatBitLines(std::span<const Bit> values) {
  std::string out;
  out.reserve(values.size() * 2);
  for (Bit value : values) {
    out.push_back(value ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

}  // namespace jrr

#endif  // JRR_DATASET_H_
