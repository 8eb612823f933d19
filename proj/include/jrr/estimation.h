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

// Frequency estimators, closed-form variances and evaluation metrics.

#ifndef JRR_ESTIMATION_H_
#define JRR_ESTIMATION_H_

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace jrr {

// Unbiased count estimate n_v = (I_v - n q) / (p - q). Not clipped: values
// below 0 or above n are legitimate outcomes of an unbiased estimator.
inline absl::StatusOr<double> Estimate(double count, double n, double p, double q) {
  if (!(p > q)) {
    return absl::InvalidArgumentError(
        absl::StrCat("estimator needs p > q, got p=", p, " q=", q));
  }
  return (count - n * q) / (p - q);
}

// p q / (p - q)^2 with q = 1 - p; decreasing on (0.5, 1].
inline double NoiseFactor(double p) {
  const double q = 1.0 - p;
  return p * q / ((p - q) * (p - q));
}

// n + rho ((2 n1 - n)^2 - n) / (n - 1). For n >= 2 and rho in (-1, 1] it is
// positive except at n = 2, n1 = 1, rho = 1, where it is 0.
inline double PairingFactor(double n, double n1, double rho) {
  const double skew = (2.0 * n1 - n) * (2.0 * n1 - n) - n;
  return n + rho * skew / (n - 1.0);
}

// Variance of the estimator under independent randomized response,
// n p q / (p - q)^2. Requires p > 0.5.
inline double RrVariance(double n, double p) { return n * NoiseFactor(p); }

// Variance of the estimator under joint randomized response with a uniformly
// random pairing of n contributors, n1 of which hold value 1.
inline absl::StatusOr<double> JrrVariance(size_t n, size_t n1, double p, double rho) {
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("joint variance needs n >= 2, got ", n));
  }
  if (n1 > n) {
    return absl::InvalidArgumentError(absl::StrCat("n1=", n1, " exceeds n=", n));
  }
  if (!(p > 0.5 && p <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("need 0.5 < p <= 1, got ", p));
  }
  return NoiseFactor(p) *
         PairingFactor(static_cast<double>(n), static_cast<double>(n1), rho);
}

// (1/|D|) sum_v (estimate_v - truth_v)^2.
inline absl::StatusOr<double> Mse(std::span<const double> estimates,
                                  std::span<const double> truths) {
  if (estimates.size() != truths.size()) {
    return absl::InvalidArgumentError("estimates and truths differ in domain size");
  }
  if (estimates.empty()) return absl::InvalidArgumentError("empty domain");
  double total = 0.0;
  for (size_t v = 0; v < estimates.size(); ++v) {
    const double error = estimates[v] - truths[v];
    total += error * error;
  }
  return total / static_cast<double>(estimates.size());
}

// Mean of |estimate_v - truth_v| / truth_v over values with truth_v > 0.
// Values with a zero true count are excluded rather than divided by zero.
inline absl::StatusOr<double> Are(std::span<const double> estimates,
                                  std::span<const double> truths) {
  if (estimates.size() != truths.size()) {
    return absl::InvalidArgumentError("estimates and truths differ in domain size");
  }
  double total = 0.0;
  size_t used = 0;
  for (size_t v = 0; v < estimates.size(); ++v) {
    if (truths[v] > 0.0) {
      total += std::abs(estimates[v] - truths[v]) / truths[v];
      ++used;
    }
  }
  if (used == 0) {
    return absl::InvalidArgumentError("ARE undefined: every true count is zero");
  }
  return total / static_cast<double>(used);
}

inline absl::StatusOr<double> RelativeIncrease(double mse_jrr, double mse_rr) {
  if (!(mse_rr > 0.0)) {
    return absl::InvalidArgumentError("relative increase needs a positive RR MSE");
  }
  return (mse_jrr - mse_rr) / mse_rr;
}

struct MseCurvePoint {
  double ratio = 0.0;  // n1 / n
  double mse_jrr = 0.0;
  double mse_rr = 0.0;
};

// Width of the contiguous n1/n interval around 0.5 where JRR's MSE exceeds
// RR's. `curve` must be sorted by ratio. Crossings are located by linear
// interpolation of the MSE difference between neighbouring grid points; an
// interval that runs into the end of the grid stops there. Returns 0 when
// JRR does not underperform at the grid point nearest 0.5.
inline absl::StatusOr<double> UnderperformingRange(std::span<const MseCurvePoint> curve) {
  if (curve.empty()) return absl::InvalidArgumentError("empty MSE curve");
  for (size_t i = 1; i < curve.size(); ++i) {
    if (!(curve[i].ratio > curve[i - 1].ratio)) {
      return absl::InvalidArgumentError("curve ratios must be strictly increasing");
    }
  }
  auto gap = [&](size_t i) { return curve[i].mse_jrr - curve[i].mse_rr; };
  size_t center = 0;
  for (size_t i = 1; i < curve.size(); ++i) {
    if (std::abs(curve[i].ratio - 0.5) < std::abs(curve[center].ratio - 0.5)) {
      center = i;
    }
  }
  if (!(gap(center) > 0.0)) return 0.0;
  auto crossing = [&](size_t inside, size_t outside) {
    const double g_in = gap(inside);
    const double g_out = gap(outside);
    const double t = g_in / (g_in - g_out);
    return curve[inside].ratio + t * (curve[outside].ratio - curve[inside].ratio);
  };
  size_t left = center;
  while (left > 0 && gap(left - 1) > 0.0) --left;
  size_t right = center;
  while (right + 1 < curve.size() && gap(right + 1) > 0.0) ++right;
  const double lower = left == 0 ? curve.front().ratio : crossing(left, left - 1);
  const double upper =
      right + 1 == curve.size() ? curve.back().ratio : crossing(right, right + 1);
  return upper - lower;
}

// Reference width 1/sqrt(n) of the n1/n band where (2 n1 - n)^2 < n.
inline double TheoreticalUnderperformingRange(double n) { return 1.0 / std::sqrt(n); }

// Estimates for every value of a domain of size k from a report histogram.
struct EstimationResult {
  std::vector<double> n_hat;
  std::vector<size_t> counts;
  std::optional<double> var_closed;
  size_t n = 0;
};

inline absl::StatusOr<EstimationResult> EstimateFrequencies(std::span<const int> reports,
                                                            int k, double p, double q) {
  if (k < 2) return absl::InvalidArgumentError("domain size must be at least 2");
  EstimationResult result;
  result.n = reports.size();
  result.counts.assign(static_cast<size_t>(k), 0);
  for (int report : reports) {
    if (report < 0 || report >= k) {
      return absl::InvalidArgumentError(
          absl::StrCat("report ", report, " outside domain [0, ", k, ")"));
    }
    ++result.counts[static_cast<size_t>(report)];
  }
  for (size_t count : result.counts) {
    auto estimate = Estimate(static_cast<double>(count), static_cast<double>(result.n), p, q);
    if (!estimate.ok()) return estimate.status();
    result.n_hat.push_back(*estimate);
  }
  return result;
}

// One emitted experiment record; mirrors the harness CSV columns.
struct MetricsRow {
  std::string mechanism;
  size_t n = 0;
  size_t n1 = 0;
  double epsilon = 0.0;
  size_t m_max = 0;
  double p = 0.0;
  double rho = 0.0;
  size_t trials = 0;
  unsigned long long seed = 0;
  double mse = 0.0;
  double are = 0.0;
  double var_closed = 0.0;
  double are_p10 = 0.0;
  double are_p50 = 0.0;
  double are_p90 = 0.0;
  std::optional<double> ri;
  std::optional<double> r_range;
  bool failed = false;
};

}  // namespace jrr

#endif  // JRR_ESTIMATION_H_
