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

// Command-line front end: parameter search, perturbation, estimation,
// Monte-Carlo simulation, exact enumeration and dataset summaries.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "jrr/jrr.h"

namespace {

using nlohmann::json;

struct Options {
  size_t n = 10000;
  std::optional<size_t> n1;
  double ratio = 0.1;
  double epsilon = 0.1;
  size_t m_max = 5;
  size_t trials = 1000;
  uint64_t seed = 0;
  std::string mechanism = "both";
  std::string dataset;
  std::vector<std::string> datasets;
  std::string format = "bit-lines";
  std::string column;
  std::string out;
  std::string sweep_epsilon;
  std::string sweep_n;
  std::string sweep_ratio;
  std::string sweep_m;
  double delta_p = 1e-4;
  double delta_rho = 1e-4;
  std::optional<double> p;
  std::optional<double> rho;
  std::string perturb_mode = "direct";
  size_t threads = 1;
  std::string values;
  bool single_pairing = false;
};

absl::StatusOr<std::vector<double>> ParseList(const std::string& text) {
  std::vector<double> values;
  for (absl::string_view field : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    double value;
    if (!absl::SimpleAtod(field, &value)) {
      return absl::InvalidArgumentError(absl::StrCat("not a number: '", field, "'"));
    }
    values.push_back(value);
  }
  if (values.empty()) return absl::InvalidArgumentError("empty list");
  return values;
}

// start:stop:step, inclusive of stop up to rounding.
absl::StatusOr<std::vector<double>> ParseRange(const std::string& text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, ':');
  double start, stop, step;
  if (parts.size() != 3 || !absl::SimpleAtod(parts[0], &start) ||
      !absl::SimpleAtod(parts[1], &stop) || !absl::SimpleAtod(parts[2], &step)) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected start:stop:step, got '", text, "'"));
  }
  if (!(step > 0.0) || stop < start) {
    return absl::InvalidArgumentError("range needs step > 0 and stop >= start");
  }
  const auto count = static_cast<size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> values;
  for (size_t i = 0; i < count; ++i) values.push_back(start + static_cast<double>(i) * step);
  return values;
}

absl::StatusOr<jrr::DatasetFormat> ParseFormat(const std::string& name) {
  if (name == "bit-lines") return jrr::DatasetFormat::kBitLines;
  if (name == "csv-column") return jrr::DatasetFormat::kCsvColumn;
  return absl::InvalidArgumentError(absl::StrCat("unknown format '", name, "'"));
}

absl::StatusOr<jrr::PerturbMode> ParseMode(const std::string& name) {
  if (name == "direct") return jrr::PerturbMode::kDirectJoint;
  if (name == "sampler") return jrr::PerturbMode::kSampler;
  return absl::InvalidArgumentError(absl::StrCat("unknown perturb mode '", name, "'"));
}

absl::Status WriteOutput(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    return absl::OkStatus();
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << contents;
  return absl::OkStatus();
}

double RrProbability(double epsilon) { return std::exp(epsilon) / (1.0 + std::exp(epsilon)); }

// (p, rho) from explicit flags, or RR's p, or the grid search.
absl::StatusOr<jrr::PerturbParams> ResolveParams(const Options& options, bool jrr,
                                                 size_t n) {
  if (options.p) return jrr::MakeBinaryParams(*options.p, options.rho.value_or(0.0));
  if (!jrr) return jrr::MakeBinaryParams(RrProbability(options.epsilon), 0.0);
  auto found = jrr::SearchParams({options.epsilon, options.m_max, n},
                                 {options.delta_p, options.delta_rho});
  if (!found.ok()) return found.status();
  if (!found->has_value()) return absl::NotFoundError("no feasible (p, rho) on the grid");
  return jrr::MakeBinaryParams((*found)->p, (*found)->rho);
}

absl::StatusOr<jrr::Dataset> LoadFromOptions(const Options& options, const std::string& path) {
  auto format = ParseFormat(options.format);
  if (!format.ok()) return format.status();
  return jrr::LoadDataset(path, *format, options.column);
}

absl::Status RunSearchParams(const Options& options) {
  const jrr::PrivacyBudget budget{options.epsilon, options.m_max, options.n};
  auto found = jrr::SearchParams(budget, {options.delta_p, options.delta_rho});
  if (!found.ok()) return found.status();
  json out;
  out["epsilon"] = options.epsilon;
  out["n"] = options.n;
  out["m_max"] = options.m_max;
  out["delta_p"] = options.delta_p;
  out["delta_rho"] = options.delta_rho;
  out["feasibility_slack"] = jrr::kFeasibilitySlack;
  if (!found->has_value()) {
    out["found"] = false;
    return WriteOutput(options.out, out.dump(2) + "\n");
  }
  const jrr::SearchResult& result = **found;
  out["found"] = true;
  out["p"] = result.p;
  out["rho"] = result.rho;
  out["p_step"] = result.p_step;
  out["rho_step"] = result.rho_step;
  json epsilons = json::array();
  for (size_t m = 0; m <= options.m_max; ++m) {
    auto eps = jrr::EffectiveEpsilon(result.p, result.rho, options.n, m);
    if (!eps.ok()) return eps.status();
    epsilons.push_back(jrr::JsonNumber(*eps));
  }
  out["effective_epsilon"] = std::move(epsilons);
  if (options.n1) {
    auto variance = jrr::JrrVariance(options.n, *options.n1, result.p, result.rho);
    if (!variance.ok()) return variance.status();
    out["n1"] = *options.n1;
    out["var_closed"] = *variance;
    out["var_rr"] =
        jrr::RrVariance(static_cast<double>(options.n), RrProbability(options.epsilon));
  }
  return WriteOutput(options.out, out.dump(2) + "\n");
}

absl::Status RunPerturb(const Options& options) {
  if (options.dataset.empty()) return absl::InvalidArgumentError("--dataset is required");
  auto dataset = LoadFromOptions(options, options.dataset);
  if (!dataset.ok()) return dataset.status();
  if (options.mechanism != "rr" && options.mechanism != "jrr") {
    return absl::InvalidArgumentError("perturb needs --mechanism rr or jrr");
  }
  const bool jrr = options.mechanism == "jrr";
  auto params = ResolveParams(options, jrr, dataset->values.size());
  if (!params.ok()) return params.status();
  jrr::Rng rng = jrr::MakeRng(options.seed);
  std::vector<jrr::Bit> reports;
  if (jrr) {
    auto mode = ParseMode(options.perturb_mode);
    if (!mode.ok()) return mode.status();
    auto pairing = jrr::RandomPairing(dataset->values.size(), rng);
    if (!pairing.ok()) return pairing.status();
    auto perturbed = jrr::PerturbCohort(dataset->values, *pairing, *params, *mode, rng);
    if (!perturbed.ok()) return perturbed.status();
    reports = *std::move(perturbed);
  } else {
    for (jrr::Bit value : dataset->values) {
      auto report = jrr::RrPerturb(value, params->p, rng);
      if (!report.ok()) return report.status();
      reports.push_back(*report);
    }
  }
  std::cerr << "p=" << jrr::FormatNumber(params->p) << " rho=" << jrr::FormatNumber(params->rho)
            << "\n";
  return WriteOutput(options.out, jrr::FormatBitLines(reports));
}

absl::Status RunEstimate(const Options& options) {
  if (options.dataset.empty()) return absl::InvalidArgumentError("--dataset is required");
  auto reports = LoadFromOptions(options, options.dataset);
  if (!reports.ok()) return reports.status();
  const double p = options.p.value_or(RrProbability(options.epsilon));
  const double q = 1.0 - p;
  std::vector<int> as_int(reports->values.begin(), reports->values.end());
  auto result = jrr::EstimateFrequencies(as_int, 2, p, q);
  if (!result.ok()) return result.status();
  json out;
  out["n"] = result->n;
  out["p"] = p;
  out["reported_ones"] = result->counts[1];
  out["n1_hat"] = result->n_hat[1];
  out["n0_hat"] = result->n_hat[0];
  if (options.n1) {
    auto variance = jrr::JrrVariance(result->n, *options.n1, p, options.rho.value_or(0.0));
    if (!variance.ok()) return variance.status();
    out["var_closed"] = *variance;
  }
  return WriteOutput(options.out, out.dump(2) + "\n");
}

absl::StatusOr<jrr::ExperimentConfig> BuildExperiment(const Options& options) {
  jrr::ExperimentConfig config;
  if (options.mechanism == "rr") {
    config.mechanism = jrr::Mechanism::kRr;
  } else if (options.mechanism == "jrr") {
    config.mechanism = jrr::Mechanism::kJrr;
  } else if (options.mechanism == "both") {
    config.mechanism = jrr::Mechanism::kBoth;
  } else {
    return absl::InvalidArgumentError(absl::StrCat("unknown mechanism '", options.mechanism, "'"));
  }
  config.n = options.n;
  config.n1 = options.n1;
  config.ratio = options.ratio;
  config.epsilon = options.epsilon;
  config.m_max = options.m_max;
  config.trials = options.trials;
  config.seed = options.seed;
  config.search = {options.delta_p, options.delta_rho};
  config.threads = options.threads;
  auto mode = ParseMode(options.perturb_mode);
  if (!mode.ok()) return mode.status();
  config.perturb_mode = *mode;
  if (!options.dataset.empty()) {
    auto dataset = LoadFromOptions(options, options.dataset);
    if (!dataset.ok()) return dataset.status();
    config.dataset = std::move(dataset->values);
    config.dataset_name = dataset->summary.name;
  }
  int sweeps = 0;
  auto set_sweep = [&](jrr::SweepAxis axis,
                       absl::StatusOr<std::vector<double>> values) -> absl::Status {
    if (!values.ok()) return values.status();
    config.sweep = {axis, *std::move(values)};
    ++sweeps;
    return absl::OkStatus();
  };
  absl::Status status;
  if (!options.sweep_epsilon.empty()) {
    status.Update(set_sweep(jrr::SweepAxis::kEpsilon, ParseList(options.sweep_epsilon)));
  }
  if (!options.sweep_n.empty()) {
    status.Update(set_sweep(jrr::SweepAxis::kN, ParseList(options.sweep_n)));
  }
  if (!options.sweep_ratio.empty()) {
    status.Update(set_sweep(jrr::SweepAxis::kRatio, ParseRange(options.sweep_ratio)));
  }
  if (!options.sweep_m.empty()) {
    status.Update(set_sweep(jrr::SweepAxis::kM, ParseList(options.sweep_m)));
  }
  if (!status.ok()) return status;
  if (sweeps > 1) return absl::InvalidArgumentError("at most one sweep axis per run");
  return config;
}

absl::Status RunSimulate(const Options& options) {
  auto config = BuildExperiment(options);
  if (!config.ok()) return config.status();
  auto result = jrr::RunExperiment(*config);
  if (!result.ok()) return result.status();
  if (absl::Status status = WriteOutput(options.out, jrr::FormatCsv(result->rows));
      !status.ok()) {
    return status;
  }
  if (!options.out.empty() && options.out != "-") {
    return WriteOutput(options.out + ".json",
                       jrr::SidecarJson(*config, *result).dump(2) + "\n");
  }
  return absl::OkStatus();
}

absl::Status RunOracle(const Options& options) {
  std::vector<jrr::Bit> values;
  if (!options.values.empty()) {
    for (absl::string_view field : absl::StrSplit(options.values, ',')) {
      if (field != "0" && field != "1") {
        return absl::InvalidArgumentError(absl::StrCat("--values entries must be 0 or 1"));
      }
      values.push_back(field == "1" ? 1 : 0);
    }
  } else {
    const size_t n1 = options.n1.value_or(
        static_cast<size_t>(std::llround(options.ratio * static_cast<double>(options.n))));
    if (n1 > options.n) return absl::InvalidArgumentError("n1 exceeds n");
    values.assign(options.n, 0);
    for (size_t i = 0; i < n1; ++i) values[i] = 1;
  }
  if (!options.p) return absl::InvalidArgumentError("oracle needs --p (and optionally --rho)");
  auto params = jrr::MakeBinaryParams(*options.p, options.rho.value_or(0.0));
  if (!params.ok()) return params.status();
  std::optional<jrr::Pairing> pairing;
  if (options.single_pairing) {
    std::vector<size_t> identity(values.size());
    for (size_t i = 0; i < identity.size(); ++i) identity[i] = i;
    pairing = jrr::PairingFromPermutation(identity);
  }
  auto dist = jrr::oracle::EnumerateReports(values, *params, pairing);
  if (!dist.ok()) return dist.status();
  const jrr::oracle::Moments moments =
      jrr::oracle::ExactEstimatorMoments(*dist, params->p, params->q);
  size_t n1 = 0;
  for (jrr::Bit value : values) n1 += value;
  json out;
  out["provenance"] = {{"n", dist->n},
                       {"values", values},
                       {"p", params->p},
                       {"rho", params->rho},
                       {"pairing_averaged", dist->pairing_averaged},
                       {"pairing_count", dist->pairing_count}};
  json support = json::array();
  for (const auto& [reports, probability] : dist->Support()) {
    support.push_back({{"reports", reports}, {"probability", probability}});
  }
  out["support"] = std::move(support);
  out["total_probability"] = dist->Total();
  out["exact_mean"] = moments.mean;
  out["exact_variance"] = moments.variance;
  out["true_n1"] = n1;
  if (dist->pairing_averaged) {
    auto closed = jrr::JrrVariance(values.size(), n1, params->p, params->rho);
    if (!closed.ok()) return closed.status();
    out["closed_form_variance"] = *closed;
    out["variance_abs_diff"] = std::abs(*closed - moments.variance);
  }
  out["mean_abs_diff"] = std::abs(moments.mean - static_cast<double>(n1));
  return WriteOutput(options.out, out.dump(2) + "\n");
}

absl::Status RunSummarize(const Options& options) {
  if (options.datasets.empty()) return absl::InvalidArgumentError("--dataset is required");
  json out = json::array();
  for (const std::string& path : options.datasets) {
    auto dataset = LoadFromOptions(options, path);
    if (!dataset.ok()) return dataset.status();
    out.push_back({{"name", dataset->summary.name},
                   {"n", dataset->summary.n},
                   {"n1", dataset->summary.n1},
                   {"ratio", dataset->summary.ratio}});
  }
  return WriteOutput(options.out, out.dump(2) + "\n");
}

void AddCommon(CLI::App* app, Options& options) {
  app->add_option("--n", options.n, "Population size");
  app->add_option("--n1", options.n1, "Number of contributors with value 1");
  app->add_option("--ratio", options.ratio, "n1 / n when --n1 is not given");
  app->add_option("--epsilon", options.epsilon, "Privacy budget");
  app->add_option("--m-max", options.m_max, "Assumed number of colluders M");
  app->add_option("--delta-p", options.delta_p, "Search step for p");
  app->add_option("--delta-rho", options.delta_rho, "Search step for rho");
  app->add_option("--seed", options.seed, "Master seed");
  app->add_option("--out", options.out, "Output path (stdout when omitted)");
}

void AddDatasetFlags(CLI::App* app, Options& options) {
  app->add_option("--format", options.format, "bit-lines or csv-column")
      ->check(CLI::IsMember({"bit-lines", "csv-column"}));
  app->add_option("--column", options.column, "Column name for csv-column");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint randomized response toolkit"};
  app.set_version_flag("--version", std::string(jrr::kToolVersion));
  app.require_subcommand(1);
  Options options;

  CLI::App* search = app.add_subcommand("search-params", "Grid search for (p, rho)");
  AddCommon(search, options);

  CLI::App* perturb = app.add_subcommand("perturb", "Perturb a cohort file");
  AddCommon(perturb, options);
  AddDatasetFlags(perturb, options);
  perturb->add_option("--dataset", options.dataset, "Input cohort")->required();
  perturb->add_option("--mechanism", options.mechanism, "rr or jrr")
      ->check(CLI::IsMember({"rr", "jrr"}));
  perturb->add_option("--p", options.p, "Explicit p (skips the search)");
  perturb->add_option("--rho", options.rho, "Explicit rho (with --p)");
  perturb->add_option("--perturb-mode", options.perturb_mode, "direct or sampler");

  CLI::App* estimate = app.add_subcommand("estimate", "Estimate n1 from reports");
  AddCommon(estimate, options);
  AddDatasetFlags(estimate, options);
  estimate->add_option("--dataset", options.dataset, "Report file")->required();
  estimate->add_option("--p", options.p, "Perturbation p (default e^eps / (1 + e^eps))");
  estimate->add_option("--rho", options.rho, "rho, for the closed-form variance");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo experiment to CSV");
  AddCommon(simulate, options);
  AddDatasetFlags(simulate, options);
  simulate->add_option("--dataset", options.dataset, "Cohort file instead of synthetic data");
  simulate->add_option("--mechanism", options.mechanism, "rr, jrr or both")
      ->check(CLI::IsMember({"rr", "jrr", "both"}));
  simulate->add_option("--trials", options.trials, "Trials per sweep point");
  simulate->add_option("--sweep-epsilon", options.sweep_epsilon, "a,b,c");
  simulate->add_option("--sweep-n", options.sweep_n, "a,b,c");
  simulate->add_option("--sweep-ratio", options.sweep_ratio, "start:stop:step");
  simulate->add_option("--sweep-m", options.sweep_m, "a,b,c");
  simulate->add_option("--perturb-mode", options.perturb_mode, "direct or sampler");
  simulate->add_option("--threads", options.threads, "Worker threads per sweep point");

  CLI::App* oracle = app.add_subcommand("oracle", "Exact enumeration for a small cohort");
  AddCommon(oracle, options);
  oracle->add_option("--values", options.values, "Comma-separated bits, e.g. 1,1,0,0");
  oracle->add_option("--p", options.p, "Perturbation p")->required();
  oracle->add_option("--rho", options.rho, "Correlation rho");
  oracle->add_flag("--single-pairing", options.single_pairing,
                   "Use the pairing (0,1),(2,3),... instead of averaging over all");

  CLI::App* datasets = app.add_subcommand("datasets", "Dataset utilities");
  datasets->require_subcommand(1);
  CLI::App* summarize = datasets->add_subcommand("summarize", "n, n1 and ratio per file");
  AddDatasetFlags(summarize, options);
  summarize->add_option("--dataset", options.datasets, "Cohort files")->required();
  summarize->add_option("--out", options.out, "Output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  absl::Status status;
  if (search->parsed()) {
    status = RunSearchParams(options);
  } else if (perturb->parsed()) {
    status = RunPerturb(options);
  } else if (estimate->parsed()) {
    status = RunEstimate(options);
  } else if (simulate->parsed()) {
    status = RunSimulate(options);
  } else if (oracle->parsed()) {
    status = RunOracle(options);
  } else if (summarize->parsed()) {
    status = RunSummarize(options);
  }
  if (!status.ok()) {
    std::cerr << "error: " << status << "\n";
    return 1;
  }
  return 0;
}
