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

// Perturbation mechanisms: classical randomized response, joint randomized
// response over a contributor pair (direct sampling from the truthfulness
// table, or the C/R sampler instantiation), the k-ary extension, and the
// unary-encoding (OUE) integration.

#ifndef JRR_MECHANISMS_H_
#define JRR_MECHANISMS_H_

#include <cmath>
#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "jrr/params.h"
#include "jrr/random.h"

namespace jrr {

using Bit = std::uint8_t;

namespace internal {

inline absl::Status CheckBit(int value) {
  if (value != 0 && value != 1) {
    return absl::InvalidArgumentError(absl::StrCat("expected a bit, got ", value));
  }
  return absl::OkStatus();
}

inline double ClampTiny(double probability) {
  return probability < 0.0 ? 0.0 : probability;
}

}  // namespace internal

// Reports `value` with probability p and its complement otherwise.
inline absl::StatusOr<Bit> RrPerturb(Bit value, double p, Rng& rng) {
  if (absl::Status status = internal::CheckBit(value); !status.ok()) return status;
  if (!(p > 0.5 && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("randomized response needs 0.5 < p <= 1, got ", p));
  }
  return Bernoulli(rng, p) ? value : static_cast<Bit>(1 - value);
}

// Truthfulness table of a binary pair:
//   p11 = p^2 + rho p q,  p10 = p01 = (1 - rho) p q,  p00 = q^2 + rho p q.
inline absl::StatusOr<JointTable> MakeJointTable(const PerturbParams& params) {
  if (params.k != 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("joint table is binary-only, got k=", params.k));
  }
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  const double p = params.p;
  const double q = params.q;
  const double rho = params.rho;
  JointTable table;
  table.p11 = internal::ClampTiny(p * p + rho * p * q);
  table.p10 = internal::ClampTiny((1.0 - rho) * p * q);
  table.p01 = table.p10;
  table.p00 = internal::ClampTiny(q * q + rho * p * q);
  return table;
}

// Truthfulness table for two indicators with possibly different marginals
// `first` and `second` and correlation coefficient `rho`. Equals
// MakeJointTable when the marginals coincide.
inline absl::StatusOr<JointTable> MakeBivariateTable(double first, double second,
                                                     double rho) {
  if (!(first >= 0.0 && first <= 1.0 && second >= 0.0 && second <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("marginals must be probabilities, got ", first, ", ", second));
  }
  const double spread =
      std::sqrt(first * (1.0 - first) * second * (1.0 - second));
  JointTable table;
  table.p11 = first * second + rho * spread;
  table.p10 = first - table.p11;
  table.p01 = second - table.p11;
  table.p00 = 1.0 - first - second + table.p11;
  for (double entry : {table.p11, table.p10, table.p01, table.p00}) {
    if (entry < -kProbabilityTolerance) {
      return absl::InvalidArgumentError(absl::StrCat(
          "infeasible rho=", rho, " for marginals ", first, ", ", second));
    }
  }
  table.p11 = internal::ClampTiny(table.p11);
  table.p10 = internal::ClampTiny(table.p10);
  table.p01 = internal::ClampTiny(table.p01);
  table.p00 = internal::ClampTiny(table.p00);
  return table;
}

// Draws (T1, T2) from the table; true means "reports truthfully".
inline std::pair<bool, bool> DrawTruthfulness(const JointTable& table, Rng& rng) {
  const double u = UniformUnit(rng);
  if (u < table.p11) return {true, true};
  if (u < table.p11 + table.p10) return {true, false};
  if (u < table.p11 + table.p10 + table.p01) return {false, true};
  return {false, false};
}

inline std::pair<Bit, Bit> JrrPerturbPair(Bit x1, Bit x2, const JointTable& table,
                                          Rng& rng) {
  const auto [t1, t2] = DrawTruthfulness(table, rng);
  return {t1 ? x1 : static_cast<Bit>(1 - x1), t2 ? x2 : static_cast<Bit>(1 - x2)};
}

// C distribution {1.5: p - s, 0.5: s, -0.5: s, -1.5: q - s} with
// s = sqrt(-rho p q). Only defined for rho <= 0; callers with positive rho
// sample the pair directly from the joint table.
inline absl::StatusOr<SamplerConfig> MakeSamplerConfig(const PerturbParams& params) {
  if (params.k != 2) {
    return absl::InvalidArgumentError("sampler instantiation is binary-only");
  }
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  if (params.rho > 0.0) {
    return absl::FailedPreconditionError(absl::StrCat(
        "sampler is undefined for rho > 0 (rho=", params.rho,
        "); sample directly from the joint table"));
  }
  const double s = std::sqrt(-params.rho * params.p * params.q);
  const double top = params.p - s;
  const double bottom = params.q - s;
  if (top < -kProbabilityTolerance || bottom < -kProbabilityTolerance) {
    return absl::FailedPreconditionError(absl::StrCat(
        "sampler infeasible: p - s = ", top, ", q - s = ", bottom));
  }
  SamplerConfig config;
  config.s = s;
  config.c_probs = {internal::ClampTiny(top), s, s, internal::ClampTiny(bottom)};
  return config;
}

inline double DrawC(const SamplerConfig& config, Rng& rng) {
  const double u = UniformUnit(rng);
  double cumulative = 0.0;
  for (int i = 0; i < 3; ++i) {
    cumulative += config.c_probs[i];
    if (u < cumulative) return SamplerConfig::kValues[i];
  }
  return SamplerConfig::kValues[3];
}

// Truthful iff c + r > 0. c is a half-integer and r is +-1, so the sum is
// never zero.
constexpr Bit SamplerDecide(double c, int r) { return c + r > 0.0 ? 1 : 0; }

// Joint k-ary perturbation of a pair with values in {0, ..., k-1}. An
// untruthful report is uniform over the k - 1 other values.
inline absl::StatusOr<std::pair<int, int>> KjrrPerturbPair(int v1, int v2,
                                                           const PerturbParams& params,
                                                           Rng& rng) {
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  if (v1 < 0 || v1 >= params.k || v2 < 0 || v2 >= params.k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "values must lie in [0, ", params.k, "), got ", v1, ", ", v2));
  }
  const KaryJoint joint = KaryJointProbabilities(params);
  const double others = static_cast<double>(params.k - 1);
  const JointTable truth{internal::ClampTiny(joint.both),
                         internal::ClampTiny(others * joint.first_only),
                         internal::ClampTiny(others * joint.second_only),
                         internal::ClampTiny(others * others * joint.neither)};
  const auto [t1, t2] = DrawTruthfulness(truth, rng);
  std::uniform_int_distribution<int> other(0, params.k - 2);
  auto report = [&](bool truthful, int value) {
    if (truthful) return value;
    const int draw = other(rng);
    return draw < value ? draw : draw + 1;
  };
  const int r1 = report(t1, v1);
  const int r2 = report(t2, v2);
  return std::make_pair(r1, r2);
}

// Optimized unary encoding parameters: Pr[B'[j] = 1] is p for the encoded
// position and q elsewhere. `rho` correlates the two contributors' bits at
// each position and is shared across positions.
struct OueParams {
  double p = 0.5;
  double q = 0.5;
  double rho = 0.0;
  int k = 2;
};

// Standard OUE choice p = 1/2, q = 1 / (e^epsilon + 1).
inline OueParams MakeOptimizedOue(double epsilon, double rho, int k) {
  return OueParams{0.5, 1.0 / (std::exp(epsilon) + 1.0), rho, k};
}

inline std::vector<Bit> OneHot(int value, int k) {
  std::vector<Bit> encoded(static_cast<size_t>(k), 0);
  encoded[static_cast<size_t>(value)] = 1;
  return encoded;
}

// Perturbs the one-hot encodings of x1 and x2 bit by bit. Position j of the two
// outputs is drawn from a truthfulness table whose marginals are the
// keep-probabilities of the two input bits (p for a 1-bit, 1 - q for a 0-bit)
// with correlation rho; positions are independent.
inline absl::StatusOr<std::pair<std::vector<Bit>, std::vector<Bit>>> OueJrrPerturbPair(
    int x1, int x2, const OueParams& params, Rng& rng) {
  if (params.k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("OUE needs a domain of at least 2 values, got k=", params.k));
  }
  if (x1 < 0 || x1 >= params.k || x2 < 0 || x2 >= params.k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "values must lie in [0, ", params.k, "), got ", x1, ", ", x2));
  }
  if (!(params.p > params.q && params.p <= 1.0 && params.q >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("OUE needs 0 <= q < p <= 1, got p=", params.p, " q=", params.q));
  }
  const double keep_one = params.p;
  const double keep_zero = 1.0 - params.q;
  // Indexed by (bit of first) * 2 + (bit of second).
  JointTable tables[4];
  {
    auto zero_zero = MakeBivariateTable(keep_zero, keep_zero, params.rho);
    auto zero_one = MakeBivariateTable(keep_zero, keep_one, params.rho);
    auto one_zero = MakeBivariateTable(keep_one, keep_zero, params.rho);
    auto one_one = MakeBivariateTable(keep_one, keep_one, params.rho);
    for (const auto* table : {&zero_zero, &zero_one, &one_zero, &one_one}) {
      if (!table->ok()) return table->status();
    }
    tables[0] = *zero_zero;
    tables[1] = *zero_one;
    tables[2] = *one_zero;
    tables[3] = *one_one;
  }
  std::vector<Bit> first = OneHot(x1, params.k);
  std::vector<Bit> second = OneHot(x2, params.k);
  for (size_t j = 0; j < first.size(); ++j) {
    const JointTable& table = tables[first[j] * 2 + second[j]];
    std::tie(first[j], second[j]) = JrrPerturbPair(first[j], second[j], table, rng);
  }
  return std::make_pair(std::move(first), std::move(second));
}

}  // namespace jrr

#endif  // JRR_MECHANISMS_H_
