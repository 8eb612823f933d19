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

// Random disjoint pairing of contributors and cohort-level perturbation.
//
// Group formation is simulated by a uniform permutation of contributor IDs
// with adjacent shuffled positions paired, which is how the shuffle-based
// instantiation forms groups. The resulting matching is uniform over all
// perfect matchings (or, for odd n, over matchings that leave one index
// out). Pairing metadata never travels with the reports.

#ifndef JRR_GROUPING_H_
#define JRR_GROUPING_H_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "jrr/mechanisms.h"
#include "jrr/params.h"
#include "jrr/random.h"

namespace jrr {

// Pairs are stored as (smaller index, larger index), ordered by the first
// element. `leftover` is set iff n is odd.
struct Pairing {
  std::vector<std::pair<size_t, size_t>> pairs;
  std::optional<size_t> leftover;

  size_t size() const { return 2 * pairs.size() + (leftover ? 1 : 0); }
  friend bool operator==(const Pairing&, const Pairing&) = default;
};

inline absl::Status ValidatePairing(const Pairing& pairing, size_t n) {
  if (pairing.size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("pairing covers ", pairing.size(), " indices, expected ", n));
  }
  if (pairing.leftover.has_value() != (n % 2 == 1)) {
    return absl::InvalidArgumentError("leftover must be present iff n is odd");
  }
  std::vector<bool> seen(n, false);
  auto mark = [&](size_t index) {
    if (index >= n || seen[index]) return false;
    seen[index] = true;
    return true;
  };
  for (const auto& [a, b] : pairing.pairs) {
    if (!mark(a) || !mark(b)) {
      return absl::InvalidArgumentError(
          absl::StrCat("pair (", a, ", ", b, ") repeats or exceeds an index"));
    }
  }
  if (pairing.leftover && !mark(*pairing.leftover)) {
    return absl::InvalidArgumentError("leftover index repeats or exceeds n");
  }
  return absl::OkStatus();
}

// Pairs shuffled positions (0,1), (2,3), ...; the last position is the
// leftover when the permutation has odd length.
inline Pairing PairingFromPermutation(std::span<const size_t> permutation) {
  const size_t n = permutation.size();
  std::vector<size_t> partner(n, n);
  for (size_t i = 0; i + 1 < n; i += 2) {
    partner[permutation[i]] = permutation[i + 1];
    partner[permutation[i + 1]] = permutation[i];
  }
  Pairing pairing;
  pairing.pairs.reserve(n / 2);
  for (size_t i = 0; i < n; ++i) {
    if (partner[i] == n) {
      pairing.leftover = i;
    } else if (partner[i] > i) {
      pairing.pairs.emplace_back(i, partner[i]);
    }
  }
  return pairing;
}

inline absl::StatusOr<Pairing> RandomPairing(size_t n, Rng& rng) {
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("pairing needs at least 2 contributors, got ", n));
  }
  std::vector<size_t> permutation(n);
  std::iota(permutation.begin(), permutation.end(), size_t{0});
  std::shuffle(permutation.begin(), permutation.end(), rng);
  return PairingFromPermutation(permutation);
}

// One sign per contributor: within a pair the smaller index draws +-1
// uniformly and its partner receives the opposite sign. The leftover gets 0.
struct RAssignment {
  std::vector<int> r;
};

inline RAssignment AssignR(const Pairing& pairing, Rng& rng) {
  RAssignment assignment;
  assignment.r.assign(pairing.size(), 0);
  for (const auto& [a, b] : pairing.pairs) {
    const int sign = Bernoulli(rng, 0.5) ? 1 : -1;
    assignment.r[a] = sign;
    assignment.r[b] = -sign;
  }
  return assignment;
}

struct Cohort {
  std::vector<Bit> values;
  Pairing pairing;

  size_t size() const { return values.size(); }
};

inline absl::StatusOr<Cohort> MakeCohort(std::vector<Bit> values, Rng& rng) {
  for (Bit value : values) {
    if (value > 1) return absl::InvalidArgumentError("cohort values must be bits");
  }
  auto pairing = RandomPairing(values.size(), rng);
  if (!pairing.ok()) return pairing.status();
  return Cohort{std::move(values), *std::move(pairing)};
}

enum class PerturbMode {
  kDirectJoint,  // draw each pair's (T1, T2) from the joint table
  kSampler,      // independent C draws plus opposite R signs per pair
};

// Perturbs every pair jointly; an odd leftover contributor uses plain
// randomized response with the same p, so its marginal is unchanged.
inline absl::StatusOr<std::vector<Bit>> PerturbCohort(std::span<const Bit> values,
                                                      const Pairing& pairing,
                                                      const PerturbParams& params,
                                                      PerturbMode mode, Rng& rng) {
  if (absl::Status status = ValidatePairing(pairing, values.size()); !status.ok()) {
    return status;
  }
  for (Bit value : values) {
    if (value > 1) return absl::InvalidArgumentError("cohort values must be bits");
  }
  auto table = MakeJointTable(params);
  if (!table.ok()) return table.status();
  std::vector<Bit> reports(values.begin(), values.end());
  auto flip = [](Bit value, bool truthful) {
    return truthful ? value : static_cast<Bit>(1 - value);
  };
  if (mode == PerturbMode::kDirectJoint) {
    for (const auto& [a, b] : pairing.pairs) {
      std::tie(reports[a], reports[b]) =
          JrrPerturbPair(values[a], values[b], *table, rng);
    }
  } else {
    auto sampler = MakeSamplerConfig(params);
    if (!sampler.ok()) return sampler.status();
    const RAssignment signs = AssignR(pairing, rng);
    for (const auto& [a, b] : pairing.pairs) {
      const bool truthful_a = SamplerDecide(DrawC(*sampler, rng), signs.r[a]) == 1;
      const bool truthful_b = SamplerDecide(DrawC(*sampler, rng), signs.r[b]) == 1;
      reports[a] = flip(values[a], truthful_a);
      reports[b] = flip(values[b], truthful_b);
    }
  }
  if (pairing.leftover) {
    const size_t i = *pairing.leftover;
    reports[i] = flip(values[i], Bernoulli(rng, params.p));
  }
  return reports;
}

inline absl::StatusOr<std::vector<Bit>> PerturbCohort(const Cohort& cohort,
                                                      const PerturbParams& params,
                                                      PerturbMode mode, Rng& rng) {
  return PerturbCohort(cohort.values, cohort.pairing, params, mode, rng);
}

}  // namespace jrr

#endif  // JRR_GROUPING_H_
