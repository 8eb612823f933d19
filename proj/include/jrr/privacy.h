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

// Privacy accounting under collusion and the grid search that picks (p, rho)
// for a privacy budget.
//
// A colluding group peer reveals its truthfulness indicator T_j, shifting the
// target's truthful-report probability to p + rho q (T_j = 1) or (1 - rho) p
// (T_j = 0). With m colluders among the other n - 1 contributors and a
// uniformly random pairing, the target's likelihood ratio is bounded by
//
//   (m p_max + (n - m - 1) p) / (m p_min + (n - m - 1) q),
//
// where p_max = max{(1 - rho) p, p + rho q}, p_min = min{(1 - rho) q, q + rho p}.

#ifndef JRR_PRIVACY_H_
#define JRR_PRIVACY_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace jrr {

struct PrivacyBudget {
  double epsilon = 0.1;
  size_t m_max = 5;  // assumed number of colluders, 0 <= m_max <= n - 1
  size_t n = 10000;
};

struct SearchConfig {
  double delta_p = 1e-4;
  double delta_rho = 1e-4;
};

// Added to e^epsilon when testing feasibility so that grid points sitting on
// the boundary do not flap with rounding.
inline constexpr double kFeasibilitySlack = 1e-12;

struct ProbabilityExtremes {
  double p_max = 0.0;
  double p_min = 0.0;
};

inline ProbabilityExtremes PExtremes(double p, double rho) {
  const double q = 1.0 - p;
  return {std::max((1.0 - rho) * p, p + rho * q), std::min((1.0 - rho) * q, q + rho * p)};
}

namespace internal {

struct CollusionRatio {
  double numerator = 0.0;
  double denominator = 0.0;
};

inline CollusionRatio CollusionTerms(double p, double rho, size_t n, size_t m) {
  const double q = 1.0 - p;
  const ProbabilityExtremes extremes = PExtremes(p, rho);
  const double peers = static_cast<double>(n - m - 1);
  const double colluders = static_cast<double>(m);
  return {colluders * extremes.p_max + peers * p,
          colluders * extremes.p_min + peers * q};
}

}  // namespace internal

// ln of the collusion ratio bound. Returns +infinity when the denominator is
// not positive (the bound is vacuous), which is a value rather than an error.
inline absl::StatusOr<double> EffectiveEpsilon(double p, double rho, size_t n, size_t m) {
  if (n < 2 || m > n - 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("need n >= 2 and 0 <= m <= n - 1, got n=", n, " m=", m));
  }
  const internal::CollusionRatio ratio = internal::CollusionTerms(p, rho, n, m);
  if (!(ratio.denominator > 0.0)) return std::numeric_limits<double>::infinity();
  return std::log(ratio.numerator / ratio.denominator);
}

// All three constraints of the parameter-selection problem: the collusion
// bound at m = M stays within e^epsilon, 1 - 1/p <= rho <= 1, 0.5 < p <= 1.
inline bool IsFeasible(double p, double rho, const PrivacyBudget& budget) {
  if (!(p > 0.5 && p <= 1.0)) return false;
  if (rho < 1.0 - 1.0 / p - 1e-12 || rho > 1.0 + 1e-12) return false;
  if (budget.n < 2 || budget.m_max > budget.n - 1) return false;
  const internal::CollusionRatio ratio =
      internal::CollusionTerms(p, rho, budget.n, budget.m_max);
  if (!(ratio.denominator > 0.0)) return false;
  return ratio.numerator <= (std::exp(budget.epsilon) + kFeasibilitySlack) * ratio.denominator;
}

struct SearchResult {
  double p = 0.0;
  double rho = 0.0;
  size_t p_step = 0;    // index of p on its grid, counted from the start
  size_t rho_step = 0;  // index of rho on its grid for this p
};

// Returns the p grid value at `step`, starting one step below the
// randomized-response optimum e^eps / (1 + e^eps).
inline double SearchGridP(double epsilon, const SearchConfig& config, size_t step) {
  const double start = std::exp(epsilon) / (1.0 + std::exp(epsilon)) - config.delta_p;
  return start - static_cast<double>(step) * config.delta_p;
}

inline double SearchGridRho(double p, const SearchConfig& config, size_t step) {
  return (1.0 - 1.0 / p) + static_cast<double>(step) * config.delta_rho;
}

// Heuristic grid search: p descends from e^eps / (1 + e^eps) - delta_p in
// steps of delta_p while p > 0.5; for each p, rho ascends from 1 - 1/p in steps
// of delta_rho while rho <= 1. The first feasible pair is returned, i.e. the
// largest feasible p with its smallest feasible rho. std::nullopt means no grid
// point is feasible.
inline absl::StatusOr<std::optional<SearchResult>> SearchParams(
    const PrivacyBudget& budget, const SearchConfig& config = {}) {
  if (!(budget.epsilon > 0.0) || !std::isfinite(budget.epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", budget.epsilon));
  }
  if (!(config.delta_p > 0.0) || !(config.delta_rho > 0.0)) {
    return absl::InvalidArgumentError("search steps must be positive");
  }
  if (budget.n < 2 || budget.m_max > budget.n - 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need n >= 2 and 0 <= M <= n - 1, got n=", budget.n, " M=", budget.m_max));
  }
  for (size_t i = 0;; ++i) {
    const double p = SearchGridP(budget.epsilon, config, i);
    if (!(p > 0.5)) break;
    for (size_t j = 0;; ++j) {
      const double rho = SearchGridRho(p, config, j);
      if (rho > 1.0 + 1e-12) break;
      if (IsFeasible(p, rho, budget)) return SearchResult{p, rho, i, j};
    }
  }
  return std::optional<SearchResult>();
}

}  // namespace jrr

#endif  // JRR_PRIVACY_H_
