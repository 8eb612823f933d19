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

// Monte-Carlo experiment runner and its CSV / JSON outputs.

#ifndef JRR_HARNESS_H_
#define JRR_HARNESS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "jrr/dataset.h"
#include "jrr/estimation.h"
#include "jrr/grouping.h"
#include "jrr/mechanisms.h"
#include "jrr/params.h"
#include "jrr/privacy.h"
#include "jrr/random.h"

namespace jrr {

inline constexpr char kToolVersion[] = "0.1.0";
inline constexpr char kCsvHeader[] =
    "mechanism,n,n1,epsilon,m_max,p,rho,trials,seed,mse,are,var_closed,are_p10,are_p50,"
    "are_p90,ri";

enum class Mechanism { kRr, kJrr, kBoth };

enum class SweepAxis { kNone, kEpsilon, kN, kRatio, kM };

struct Sweep {
  SweepAxis axis = SweepAxis::kNone;
  std::vector<double> values;
};

struct ExperimentConfig {
  Mechanism mechanism = Mechanism::kBoth;
  size_t n = 10000;
  // n1 is taken from `n1` when set, otherwise round(ratio * n). A loaded
  // dataset overrides both, and n.
  std::optional<size_t> n1;
  double ratio = 0.1;
  std::optional<std::vector<Bit>> dataset;
  std::string dataset_name;
  double epsilon = 0.1;
  size_t m_max = 5;
  size_t trials = 1000;
  uint64_t seed = 0;
  Sweep sweep;
  SearchConfig search;
  PerturbMode perturb_mode = PerturbMode::kDirectJoint;
  size_t threads = 1;
};

// Per-row values that are not part of the CSV schema.
struct RowDiagnostics {
  double mean_estimate = 0.0;
  double estimate_variance = 0.0;
  std::optional<std::string> error;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  std::vector<RowDiagnostics> diagnostics;
  // Underperforming range over a ratio sweep with both mechanisms.
  std::optional<double> r_range;
};

inline const char* MechanismName(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kRr:
      return "rr";
    case Mechanism::kJrr:
      return "jrr";
    case Mechanism::kBoth:
      return "both";
  }
  return "";
}

inline const char* SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNone:
      return "none";
    case SweepAxis::kEpsilon:
      return "epsilon";
    case SweepAxis::kN:
      return "n";
    case SweepAxis::kRatio:
      return "ratio";
    case SweepAxis::kM:
      return "m";
  }
  return "";
}

inline absl::Status ValidateConfig(const ExperimentConfig& config) {
  if (config.trials < 1) return absl::InvalidArgumentError("trials must be at least 1");
  if (config.threads < 1) return absl::InvalidArgumentError("threads must be at least 1");
  if (config.sweep.axis != SweepAxis::kNone && config.sweep.values.empty()) {
    return absl::InvalidArgumentError("sweep axis has no values");
  }
  if (config.dataset &&
      (config.sweep.axis == SweepAxis::kN || config.sweep.axis == SweepAxis::kRatio)) {
    return absl::InvalidArgumentError("a dataset fixes n and n1; cannot sweep them");
  }
  for (double value : config.sweep.values) {
    if (!std::isfinite(value) || value < 0.0) {
      return absl::InvalidArgumentError(absl::StrCat("invalid sweep value ", value));
    }
  }
  return absl::OkStatus();
}

// Linear-interpolated quantile of sorted data.
inline double Quantile(std::span<const double> sorted, double level) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double position = level * static_cast<double>(sorted.size() - 1);
  const size_t below = static_cast<size_t>(std::floor(position));
  const size_t above = std::min(below + 1, sorted.size() - 1);
  const double fraction = position - static_cast<double>(below);
  return sorted[below] + fraction * (sorted[above] - sorted[below]);
}

namespace internal {

struct SweepPoint {
  size_t n = 0;
  size_t n1 = 0;
  double epsilon = 0.0;
  size_t m_max = 0;
};

inline absl::StatusOr<SweepPoint> ResolvePoint(const ExperimentConfig& config, double value) {
  SweepPoint point{config.n, 0, config.epsilon, config.m_max};
  double ratio = config.ratio;
  std::optional<size_t> n1 = config.n1;
  switch (config.sweep.axis) {
    case SweepAxis::kNone:
      break;
    case SweepAxis::kEpsilon:
      point.epsilon = value;
      break;
    case SweepAxis::kN:
      point.n = static_cast<size_t>(std::llround(value));
      n1.reset();
      break;
    case SweepAxis::kRatio:
      ratio = value;
      n1.reset();
      break;
    case SweepAxis::kM:
      point.m_max = static_cast<size_t>(std::llround(value));
      break;
  }
  if (config.dataset) {
    point.n = config.dataset->size();
    point.n1 = static_cast<size_t>(
        std::count(config.dataset->begin(), config.dataset->end(), Bit{1}));
  } else if (n1) {
    point.n1 = *n1;
  } else {
    if (!(ratio >= 0.0 && ratio <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrCat("ratio ", ratio, " outside [0, 1]"));
    }
    point.n1 = static_cast<size_t>(std::llround(ratio * static_cast<double>(point.n)));
  }
  if (point.n < 2) return absl::InvalidArgumentError("need n >= 2");
  if (point.n1 > point.n) {
    return absl::InvalidArgumentError(absl::StrCat("n1=", point.n1, " exceeds n=", point.n));
  }
  return point;
}

struct TrialOutcome {
  double estimate = 0.0;
  double mse = 0.0;
  double are = 0.0;
};

inline TrialOutcome ScoreTrial(size_t ones_reported, const SweepPoint& point, double p) {
  const double n = static_cast<double>(point.n);
  const double q = 1.0 - p;
  const double n1_hat = (static_cast<double>(ones_reported) - n * q) / (p - q);
  const double estimates[2] = {n - n1_hat, n1_hat};
  const double truths[2] = {static_cast<double>(point.n - point.n1),
                            static_cast<double>(point.n1)};
  TrialOutcome outcome;
  outcome.estimate = n1_hat;
  outcome.mse = *Mse(estimates, truths);
  outcome.are = *Are(estimates, truths);
  return outcome;
}

// Runs trials [begin, end) of one mechanism at one sweep point.
inline absl::Status RunTrials(const ExperimentConfig& config, const std::vector<Bit>& values,
                              const SweepPoint& point, size_t sweep_index, Mechanism mechanism,
                              const PerturbParams& params, size_t begin, size_t end,
                              std::vector<TrialOutcome>& out) {
  for (size_t trial = begin; trial < end; ++trial) {
    Rng rng = MakeRng(DeriveSeed(
        config.seed, {sweep_index, static_cast<uint64_t>(mechanism), trial}));
    size_t ones = 0;
    if (mechanism == Mechanism::kRr) {
      for (Bit value : values) {
        const bool truthful = Bernoulli(rng, params.p);
        ones += truthful ? value : 1 - value;
      }
    } else {
      auto pairing = RandomPairing(values.size(), rng);
      if (!pairing.ok()) return pairing.status();
      auto reports = PerturbCohort(values, *pairing, params, config.perturb_mode, rng);
      if (!reports.ok()) return reports.status();
      ones = static_cast<size_t>(std::count(reports->begin(), reports->end(), Bit{1}));
    }
    out[trial] = ScoreTrial(ones, point, params.p);
  }
  return absl::OkStatus();
}

inline MetricsRow FailureRow(Mechanism mechanism, const SweepPoint& point,
                             const ExperimentConfig& config) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  MetricsRow row;
  row.mechanism = std::string(MechanismName(mechanism));
  row.n = point.n;
  row.n1 = point.n1;
  row.epsilon = point.epsilon;
  row.m_max = point.m_max;
  row.p = row.rho = nan;
  row.trials = config.trials;
  row.seed = config.seed;
  row.mse = row.are = row.var_closed = nan;
  row.are_p10 = row.are_p50 = row.are_p90 = nan;
  row.failed = true;
  return row;
}

inline std::pair<MetricsRow, RowDiagnostics> RunPoint(const ExperimentConfig& config,
                                                      const std::vector<Bit>& values,
                                                      const SweepPoint& point,
                                                      size_t sweep_index,
                                                      Mechanism mechanism) {
  RowDiagnostics diagnostics;
  auto fail = [&](const absl::Status& status) {
    diagnostics.error = status.ToString();
    diagnostics.mean_estimate = diagnostics.estimate_variance =
        std::numeric_limits<double>::quiet_NaN();
    return std::make_pair(FailureRow(mechanism, point, config), diagnostics);
  };

  if (!(point.epsilon > 0.0) || !std::isfinite(point.epsilon)) {
    return fail(absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ", point.epsilon)));
  }
  PerturbParams params;
  double var_closed = 0.0;
  if (mechanism == Mechanism::kRr) {
    const double p = std::exp(point.epsilon) / (1.0 + std::exp(point.epsilon));
    auto made = MakeBinaryParams(p, 0.0);
    if (!made.ok()) return fail(made.status());
    params = *made;
    var_closed = RrVariance(static_cast<double>(point.n), p);
  } else {
    auto found = SearchParams({point.epsilon, point.m_max, point.n}, config.search);
    if (!found.ok()) return fail(found.status());
    if (!found->has_value()) {
      return fail(absl::NotFoundError("no feasible (p, rho) on the search grid"));
    }
    auto made = MakeBinaryParams((*found)->p, (*found)->rho);
    if (!made.ok()) return fail(made.status());
    params = *made;
    auto variance = JrrVariance(point.n, point.n1, params.p, params.rho);
    if (!variance.ok()) return fail(variance.status());
    var_closed = *variance;
  }

  std::vector<TrialOutcome> outcomes(config.trials);
  const size_t workers = std::min(config.threads, config.trials);
  std::vector<absl::Status> statuses(workers);
  if (workers == 1) {
    statuses[0] = RunTrials(config, values, point, sweep_index, mechanism, params, 0,
                            config.trials, outcomes);
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (config.trials + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
      const size_t begin = std::min(config.trials, w * chunk);
      const size_t end = std::min(config.trials, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        statuses[w] = RunTrials(config, values, point, sweep_index, mechanism, params, begin,
                                end, outcomes);
      });
    }
    for (std::thread& worker : pool) worker.join();
  }
  for (const absl::Status& status : statuses) {
    if (!status.ok()) return fail(status);
  }

  // Aggregation is sequential in trial order so thread count cannot change
  // the output.
  const double trials = static_cast<double>(config.trials);
  double mse = 0.0;
  double are = 0.0;
  double mean = 0.0;
  std::vector<double> ares;
  ares.reserve(config.trials);
  for (const TrialOutcome& outcome : outcomes) {
    mse += outcome.mse;
    are += outcome.are;
    mean += outcome.estimate;
    ares.push_back(outcome.are);
  }
  mse /= trials;
  are /= trials;
  mean /= trials;
  double spread = 0.0;
  for (const TrialOutcome& outcome : outcomes) {
    spread += (outcome.estimate - mean) * (outcome.estimate - mean);
  }
  std::sort(ares.begin(), ares.end());

  MetricsRow row;
  row.mechanism = std::string(MechanismName(mechanism));
  row.n = point.n;
  row.n1 = point.n1;
  row.epsilon = point.epsilon;
  row.m_max = point.m_max;
  row.p = params.p;
  row.rho = params.rho;
  row.trials = config.trials;
  row.seed = config.seed;
  row.mse = mse;
  row.are = are;
  row.var_closed = var_closed;
  row.are_p10 = Quantile(ares, 0.1);
  row.are_p50 = Quantile(ares, 0.5);
  row.are_p90 = Quantile(ares, 0.9);
  diagnostics.mean_estimate = mean;
  diagnostics.estimate_variance = config.trials > 1 ? spread / (trials - 1.0) : 0.0;
  return {row, diagnostics};
}

}  // namespace internal

// Runs every sweep point in order. A point that fails yields a row marked
// failed (NaN metrics) and the sweep continues. With both mechanisms the RR
// row precedes the JRR row and the JRR row carries RI.
inline absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config) {
  if (absl::Status status = ValidateConfig(config); !status.ok()) return status;
  std::vector<double> axis_values = config.sweep.values;
  if (config.sweep.axis == SweepAxis::kNone) axis_values = {0.0};

  std::vector<Mechanism> mechanisms;
  if (config.mechanism != Mechanism::kJrr) mechanisms.push_back(Mechanism::kRr);
  if (config.mechanism != Mechanism::kRr) mechanisms.push_back(Mechanism::kJrr);

  ExperimentResult result;
  std::vector<MseCurvePoint> curve;
  for (size_t s = 0; s < axis_values.size(); ++s) {
    auto point = internal::ResolvePoint(config, axis_values[s]);
    if (!point.ok()) {
      internal::SweepPoint fallback{config.n, config.n1.value_or(0), config.epsilon,
                                    config.m_max};
      for (Mechanism mechanism : mechanisms) {
        result.rows.push_back(internal::FailureRow(mechanism, fallback, config));
        RowDiagnostics diagnostics;
        diagnostics.mean_estimate = diagnostics.estimate_variance =
            std::numeric_limits<double>::quiet_NaN();
        diagnostics.error = point.status().ToString();
        result.diagnostics.push_back(std::move(diagnostics));
      }
      continue;
    }
    std::vector<Bit> values;
    if (config.dataset) {
      values = *config.dataset;
    } else {
      auto synthesized = Synthesize(point->n, point->n1, DeriveSeed(config.seed, {s}));
      if (!synthesized.ok()) return synthesized.status();
      values = *std::move(synthesized);
    }
    const size_t first_row = result.rows.size();
    for (Mechanism mechanism : mechanisms) {
      auto [row, diagnostics] = internal::RunPoint(config, values, *point, s, mechanism);
      result.rows.push_back(std::move(row));
      result.diagnostics.push_back(std::move(diagnostics));
    }
    if (mechanisms.size() == 2) {
      const MetricsRow& rr = result.rows[first_row];
      MetricsRow& jrr = result.rows[first_row + 1];
      if (!rr.failed && !jrr.failed) {
        auto ri = RelativeIncrease(jrr.mse, rr.mse);
        if (ri.ok()) jrr.ri = *ri;
        curve.push_back({static_cast<double>(point->n1) / static_cast<double>(point->n),
                         jrr.mse, rr.mse});
      }
    }
  }
  if (config.sweep.axis == SweepAxis::kRatio && mechanisms.size() == 2 && !curve.empty()) {
    auto range = UnderperformingRange(curve);
    if (range.ok()) {
      result.r_range = *range;
      for (MetricsRow& row : result.rows) {
        if (row.mechanism == "jrr" && !row.failed) row.r_range = *range;
      }
    }
  }
  return result;
}

// %.12g, with nan / inf spelled the same on every platform.
inline std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

inline std::string FormatCsvRow(const MetricsRow& row) {
  return absl::StrCat(row.mechanism, ",", row.n, ",", row.n1, ",", FormatNumber(row.epsilon),
                      ",", row.m_max, ",", FormatNumber(row.p), ",", FormatNumber(row.rho),
                      ",", row.trials, ",", row.seed, ",", FormatNumber(row.mse), ",",
                      FormatNumber(row.are), ",", FormatNumber(row.var_closed), ",",
                      FormatNumber(row.are_p10), ",", FormatNumber(row.are_p50), ",",
                      FormatNumber(row.are_p90), ",", row.ri ? FormatNumber(*row.ri) : "");
}

inline std::string FormatCsv(std::span<const MetricsRow> rows) {
  std::string out = absl::StrCat(kCsvHeader, "\n");
  for (const MetricsRow& row : rows) absl::StrAppend(&out, FormatCsvRow(row), "\n");
  return out;
}

inline nlohmann::json JsonNumber(double value) {
  if (std::isfinite(value)) return value;
  return FormatNumber(value);
}

// Sidecar metadata: full configuration echo plus everything needed to
// interpret the CSV. Contains no timestamps, so it is reproducible.
inline nlohmann::json SidecarJson(const ExperimentConfig& config,
                                  const ExperimentResult& result) {
  nlohmann::json json;
  json["tool"] = "jrr";
  json["version"] = kToolVersion;
  json["csv_header"] = kCsvHeader;
  nlohmann::json& echo = json["config"];
  echo["mechanism"] = MechanismName(config.mechanism);
  echo["n"] = config.n;
  echo["n1"] = config.n1 ? nlohmann::json(*config.n1) : nlohmann::json(nullptr);
  echo["ratio"] = config.ratio;
  echo["dataset"] = config.dataset ? nlohmann::json(config.dataset_name) : nlohmann::json(nullptr);
  echo["epsilon"] = config.epsilon;
  echo["m_max"] = config.m_max;
  echo["trials"] = config.trials;
  echo["seed"] = config.seed;
  echo["sweep"] = {{"axis", SweepAxisName(config.sweep.axis)},
                   {"values", config.sweep.values}};
  echo["delta_p"] = config.search.delta_p;
  echo["delta_rho"] = config.search.delta_rho;
  echo["perturb_mode"] =
      config.perturb_mode == PerturbMode::kDirectJoint ? "direct-joint" : "sampler";
  json["seeding"] =
      "trial stream = mt19937_64 seeded from SplitMix64 hash of (seed, sweep index, mechanism "
      "[rr=0, jrr=1], trial index); synthetic cohort = hash of (seed, sweep index)";
  json["rr_parameters"] = "p = e^eps / (1 + e^eps), rho = 0";
  json["jrr_parameters"] =
      "first feasible (p, rho) of the descending-p / ascending-rho grid search";
  json["are_note"] = "ARE averages over values with a nonzero true count only";
  json["are_percentiles"] = "linear-interpolated 10th / 50th / 90th percentiles across trials";
  json["feasibility_slack"] = kFeasibilitySlack;
  if (config.sweep.axis == SweepAxis::kRatio && config.sweep.values.size() > 1) {
    json["ratio_grid_step"] = config.sweep.values[1] - config.sweep.values[0];
  }
  json["mse_note"] = "MSE averaged over the value domain {0, 1} and then over trials";
  nlohmann::json points = nlohmann::json::array();
  for (size_t i = 0; i < result.rows.size(); ++i) {
    const MetricsRow& row = result.rows[i];
    const RowDiagnostics& diagnostics = result.diagnostics[i];
    nlohmann::json entry = {{"mechanism", row.mechanism},
                            {"n", row.n},
                            {"n1", row.n1},
                            {"epsilon", JsonNumber(row.epsilon)},
                            {"m_max", row.m_max},
                            {"failed", row.failed},
                            {"mean_estimate", JsonNumber(diagnostics.mean_estimate)},
                            {"estimate_variance", JsonNumber(diagnostics.estimate_variance)}};
    if (diagnostics.error) entry["error"] = *diagnostics.error;
    points.push_back(std::move(entry));
  }
  json["points"] = std::move(points);
  json["r_range"] = result.r_range ? JsonNumber(*result.r_range) : nlohmann::json(nullptr);
  return json;
}

}  // namespace jrr

#endif  // JRR_HARNESS_H_
