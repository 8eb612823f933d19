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

// Parameter types shared by every perturbation mechanism.

#ifndef JRR_PARAMS_H_
#define JRR_PARAMS_H_

#include <array>
#include <cmath>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace jrr {

// Absolute tolerance for every probability-valued invariant.
inline constexpr double kProbabilityTolerance = 1e-12;

// The (p, q, rho) triple defining a joint truthfulness distribution over a
// domain of size k. `p` is the probability of reporting the true value, `q`
// the probability of reporting one specific other value, so
// p + (k - 1) q = 1.
struct PerturbParams {
  double p = 1.0;
  double q = 0.0;
  double rho = 0.0;
  int k = 2;
};

// Four probabilities of a k-ary pair report relative to the true pair
// (v1, v2). `first_only` is the probability of one specific outcome with
// v1' = v1 and v2' != v2; `neither` is for one specific outcome with both
// coordinates changed.
struct KaryJoint {
  double both = 0.0;
  double first_only = 0.0;
  double second_only = 0.0;
  double neither = 0.0;
};

// Evaluates the k-ary joint report distribution. For k = 2 the four values
// are the entries of the binary truthfulness table.
inline KaryJoint KaryJointProbabilities(const PerturbParams& params) {
  const double p = params.p;
  const double q = params.q;
  const double rho = params.rho;
  const double others = static_cast<double>(params.k - 1);
  KaryJoint joint;
  joint.both = p * p + rho * p * q;
  joint.first_only = p * q - rho * p * q / others;
  joint.second_only = joint.first_only;
  joint.neither = q * q + rho * p * q / (others * others);
  return joint;
}

inline absl::Status ValidateParams(const PerturbParams& params) {
  if (params.k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("domain size k must be at least 2, got ", params.k));
  }
  if (!std::isfinite(params.p) || !std::isfinite(params.q) ||
      !std::isfinite(params.rho)) {
    return absl::InvalidArgumentError("p, q and rho must be finite");
  }
  if (params.p > 1.0 + kProbabilityTolerance || params.q < -kProbabilityTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("probabilities out of range: p=", params.p, " q=", params.q));
  }
  const double total = params.p + (params.k - 1) * params.q;
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("p + (k-1) q must equal 1, got ", total));
  }
  if (params.k == 2 && !(params.p > 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrCat("binary p must satisfy 0.5 < p <= 1, got ", params.p));
  }
  if (!(params.p > params.q)) {
    return absl::InvalidArgumentError(
        absl::StrCat("p must exceed q, got p=", params.p, " q=", params.q));
  }
  if (params.k == 2 && (params.rho > 1.0 + kProbabilityTolerance ||
                         params.rho < 1.0 - 1.0 / params.p - kProbabilityTolerance)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "rho must lie in [1 - 1/p, 1] = [", 1.0 - 1.0 / params.p, ", 1], got ",
        params.rho));
  }
  const KaryJoint joint = KaryJointProbabilities(params);
  if (joint.both < -kProbabilityTolerance ||
      joint.first_only < -kProbabilityTolerance ||
      joint.neither < -kProbabilityTolerance) {
    return absl::InvalidArgumentError(absl::StrCat(
        "infeasible rho=", params.rho, " for p=", params.p, " k=", params.k,
        ": joint distribution has a negative entry"));
  }
  return absl::OkStatus();
}

// Binary parameters with q = 1 - p.
inline absl::StatusOr<PerturbParams> MakeBinaryParams(double p, double rho) {
  PerturbParams params{p, 1.0 - p, rho, 2};
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  return params;
}

// k-ary parameters with q = (1 - p) / (k - 1).
inline absl::StatusOr<PerturbParams> MakeKaryParams(double p, double rho, int k) {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("domain size k must be at least 2, got ", k));
  }
  PerturbParams params{p, (1.0 - p) / (k - 1), rho, k};
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  return params;
}

// Joint distribution of the truthfulness indicators (T1, T2) of a pair.
struct JointTable {
  double p11 = 1.0;
  double p10 = 0.0;
  double p01 = 0.0;
  double p00 = 0.0;

  double FirstTruthful() const { return p11 + p10; }
  double SecondTruthful() const { return p11 + p01; }
  double Sum() const { return p11 + p10 + p01 + p00; }
};

// Distribution of the auxiliary variable C used by the sampler-based
// instantiation. Entry i of `c_probs` is the probability of `kValues[i]`.
struct SamplerConfig {
  static constexpr std::array<double, 4> kValues = {1.5, 0.5, -0.5, -1.5};
  std::array<double, 4> c_probs = {1.0, 0.0, 0.0, 0.0};
  double s = 0.0;
};

}  // namespace jrr

#endif  // JRR_PARAMS_H_
