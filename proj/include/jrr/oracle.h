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

// Brute-force ground truth for small cohorts. Everything here enumerates
// outcomes exactly (every pairing, every truthfulness vector, every report
// vector) instead of relying on closed forms, so the closed forms in
// estimation.h and privacy.h can be checked against it.

#ifndef JRR_ORACLE_H_
#define JRR_ORACLE_H_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "jrr/grouping.h"
#include "jrr/mechanisms.h"
#include "jrr/params.h"

namespace jrr::oracle {

inline constexpr size_t kMaxReportEnumeration = 12;
inline constexpr size_t kMaxPrivacyEnumeration = 6;

// Compensated (Kahan) summation.
class KahanSum {
 public:
  void Add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

namespace internal {

inline void ExtendPairings(std::vector<bool>& used, size_t n, bool allow_leftover,
                           Pairing& current, std::vector<Pairing>& out) {
  size_t first = 0;
  while (first < n && used[first]) ++first;
  if (first == n) {
    out.push_back(current);
    return;
  }
  used[first] = true;
  if (allow_leftover) {
    current.leftover = first;
    ExtendPairings(used, n, false, current, out);
    current.leftover.reset();
  }
  for (size_t second = first + 1; second < n; ++second) {
    if (used[second]) continue;
    used[second] = true;
    current.pairs.emplace_back(first, second);
    ExtendPairings(used, n, allow_leftover, current, out);
    current.pairs.pop_back();
    used[second] = false;
  }
  used[first] = false;
}

}  // namespace internal

// Every pairing of {0, ..., n-1}: all perfect matchings for even n, and for
// odd n every choice of leftover combined with every perfect matching of the
// rest. (n - 1)!! and n (n - 2)!! entries respectively.
inline std::vector<Pairing> EnumeratePairings(size_t n) {
  std::vector<Pairing> out;
  if (n < 2) return out;
  std::vector<bool> used(n, false);
  Pairing current;
  internal::ExtendPairings(used, n, n % 2 == 1, current, out);
  return out;
}

// Exact law of the report vector. `probability[mask]` is the probability that
// contributor i reports bit i of `mask`.
struct ExactDistribution {
  size_t n = 0;
  std::vector<Bit> values;
  PerturbParams params;
  bool pairing_averaged = false;
  size_t pairing_count = 0;
  std::vector<double> probability;

  double Total() const {
    KahanSum total;
    for (double mass : probability) total.Add(mass);
    return total.value();
  }

  // Reachable outcomes as (report vector, probability).
  std::vector<std::pair<std::vector<Bit>, double>> Support() const {
    std::vector<std::pair<std::vector<Bit>, double>> support;
    for (size_t mask = 0; mask < probability.size(); ++mask) {
      if (probability[mask] <= 0.0) continue;
      std::vector<Bit> reports(n);
      for (size_t i = 0; i < n; ++i) reports[i] = (mask >> i) & 1U;
      support.emplace_back(std::move(reports), probability[mask]);
    }
    return support;
  }
};

namespace internal {

// Report law under one fixed pairing.
inline std::vector<double> ReportsUnderPairing(std::span<const Bit> values,
                                               const Pairing& pairing,
                                               const JointTable& table, double p) {
  std::vector<double> dist(size_t{1} << values.size(), 0.0);
  dist[0] = 1.0;
  // Bits of a contributor are still zero in every reachable mask until the
  // contributor is processed, so outcomes can be OR-ed in.
  auto apply_pair = [&](size_t a, size_t b) {
    std::vector<double> next(dist.size(), 0.0);
    const double by_truth[2][2] = {{table.p00, table.p01}, {table.p10, table.p11}};
    for (size_t mask = 0; mask < dist.size(); ++mask) {
      if (dist[mask] == 0.0) continue;
      for (int ya = 0; ya < 2; ++ya) {
        for (int yb = 0; yb < 2; ++yb) {
          const double weight = by_truth[ya == values[a]][yb == values[b]];
          if (weight == 0.0) continue;
          next[mask | (size_t(ya) << a) | (size_t(yb) << b)] += dist[mask] * weight;
        }
      }
    }
    dist.swap(next);
  };
  for (const auto& [a, b] : pairing.pairs) apply_pair(a, b);
  if (pairing.leftover) {
    const size_t i = *pairing.leftover;
    std::vector<double> next(dist.size(), 0.0);
    for (size_t mask = 0; mask < dist.size(); ++mask) {
      if (dist[mask] == 0.0) continue;
      for (int y = 0; y < 2; ++y) {
        next[mask | (size_t(y) << i)] += dist[mask] * (y == values[i] ? p : 1.0 - p);
      }
    }
    dist.swap(next);
  }
  return dist;
}

}  // namespace internal

// Exact report distribution for a binary cohort. With `pairing` unset the
// result is the uniform mixture over every pairing of the cohort.
inline absl::StatusOr<ExactDistribution> EnumerateReports(
    std::span<const Bit> values, const PerturbParams& params,
    const std::optional<Pairing>& pairing = std::nullopt) {
  const size_t n = values.size();
  if (n < 2 || n > kMaxReportEnumeration) {
    return absl::OutOfRangeError(absl::StrCat(
        "report enumeration supports 2 <= n <= ", kMaxReportEnumeration, ", got ", n));
  }
  for (Bit value : values) {
    if (value > 1) return absl::InvalidArgumentError("cohort values must be bits");
  }
  auto table = MakeJointTable(params);
  if (!table.ok()) return table.status();

  ExactDistribution result;
  result.n = n;
  result.values.assign(values.begin(), values.end());
  result.params = params;
  if (pairing) {
    if (absl::Status status = ValidatePairing(*pairing, n); !status.ok()) return status;
    result.pairing_count = 1;
    result.probability = internal::ReportsUnderPairing(values, *pairing, *table, params.p);
    return result;
  }
  const std::vector<Pairing> pairings = EnumeratePairings(n);
  const double weight = 1.0 / static_cast<double>(pairings.size());
  std::vector<KahanSum> mixture(size_t{1} << n);
  for (const Pairing& each : pairings) {
    const std::vector<double> dist =
        internal::ReportsUnderPairing(values, each, *table, params.p);
    for (size_t mask = 0; mask < dist.size(); ++mask) {
      if (dist[mask] != 0.0) mixture[mask].Add(weight * dist[mask]);
    }
  }
  result.pairing_averaged = true;
  result.pairing_count = pairings.size();
  result.probability.resize(mixture.size());
  for (size_t mask = 0; mask < mixture.size(); ++mask) {
    result.probability[mask] = mixture[mask].value();
  }
  return result;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact mean and variance of the count estimate for value 1,
// (I_1 - n q) / (p - q), under `dist`.
inline Moments ExactEstimatorMoments(const ExactDistribution& dist, double p, double q) {
  const double n = static_cast<double>(dist.n);
  auto estimate = [&](size_t mask) {
    return (static_cast<double>(std::popcount(mask)) - n * q) / (p - q);
  };
  KahanSum mean;
  for (size_t mask = 0; mask < dist.probability.size(); ++mask) {
    mean.Add(dist.probability[mask] * estimate(mask));
  }
  KahanSum variance;
  for (size_t mask = 0; mask < dist.probability.size(); ++mask) {
    const double deviation = estimate(mask) - mean.value();
    variance.Add(dist.probability[mask] * deviation * deviation);
  }
  return {mean.value(), variance.value()};
}

// Numbers of (1,1), (1,0) and (0,0) groups in a pairing.
struct GroupTypeCounts {
  size_t both_one = 0;
  size_t mixed = 0;
  size_t both_zero = 0;
};

inline GroupTypeCounts CountGroupTypes(std::span<const Bit> values, const Pairing& pairing) {
  GroupTypeCounts counts;
  for (const auto& [a, b] : pairing.pairs) {
    const int ones = values[a] + values[b];
    if (ones == 2) {
      ++counts.both_one;
    } else if (ones == 1) {
      ++counts.mixed;
    } else {
      ++counts.both_zero;
    }
  }
  return counts;
}

// Var[Y_a + Y_b] for each group type, from the four truthfulness cells.
struct GroupTypeVariances {
  double both_one = 0.0;
  double mixed = 0.0;
  double both_zero = 0.0;
};

inline GroupTypeVariances GroupVariancesByEnumeration(const JointTable& table) {
  const double cells[2][2] = {{table.p00, table.p01}, {table.p10, table.p11}};
  auto variance_of_sum = [&](int xa, int xb) {
    double mean = 0.0;
    double second = 0.0;
    for (int ta = 0; ta < 2; ++ta) {
      for (int tb = 0; tb < 2; ++tb) {
        const int ya = ta ? xa : 1 - xa;
        const int yb = tb ? xb : 1 - xb;
        mean += cells[ta][tb] * (ya + yb);
        second += cells[ta][tb] * (ya + yb) * (ya + yb);
      }
    }
    return second - mean * mean;
  };
  return {variance_of_sum(1, 1), variance_of_sum(1, 0), variance_of_sum(0, 0)};
}

// Joint truthfulness table induced by the sampler instantiation, enumerating
// R_1 in {+1, -1} (R_2 = -R_1) and both independent C draws.
inline JointTable SamplerPathTable(const SamplerConfig& config) {
  KahanSum cells[2][2];
  for (int r1 : {1, -1}) {
    const int r2 = -r1;
    for (size_t i = 0; i < 4; ++i) {
      for (size_t j = 0; j < 4; ++j) {
        const double mass = 0.5 * config.c_probs[i] * config.c_probs[j];
        const Bit t1 = SamplerDecide(SamplerConfig::kValues[i], r1);
        const Bit t2 = SamplerDecide(SamplerConfig::kValues[j], r2);
        cells[t1][t2].Add(mass);
      }
    }
  }
  return {cells[1][1].value(), cells[1][0].value(), cells[0][1].value(),
          cells[0][0].value()};
}

// Marginal of one coordinate of a k-ary pair report, summed over every outcome
// of the joint distribution.
struct KaryMarginal {
  double truthful = 0.0;            // Pr[v1' = v1]
  std::vector<double> other_values;  // Pr[v1' = w] for each w != v1
  double total = 0.0;
};

inline absl::StatusOr<KaryMarginal> KaryMarginalByEnumeration(const PerturbParams& params,
                                                              int v1, int v2) {
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  if (v1 < 0 || v1 >= params.k || v2 < 0 || v2 >= params.k) {
    return absl::InvalidArgumentError("values outside the domain");
  }
  const KaryJoint joint = KaryJointProbabilities(params);
  KaryMarginal marginal;
  std::vector<KahanSum> by_value(static_cast<size_t>(params.k));
  KahanSum total;
  for (int a = 0; a < params.k; ++a) {
    for (int b = 0; b < params.k; ++b) {
      double mass;
      if (a == v1 && b == v2) {
        mass = joint.both;
      } else if (a == v1) {
        mass = joint.first_only;
      } else if (b == v2) {
        mass = joint.second_only;
      } else {
        mass = joint.neither;
      }
      by_value[static_cast<size_t>(a)].Add(mass);
      total.Add(mass);
    }
  }
  for (int a = 0; a < params.k; ++a) {
    if (a == v1) {
      marginal.truthful = by_value[static_cast<size_t>(a)].value();
    } else {
      marginal.other_values.push_back(by_value[static_cast<size_t>(a)].value());
    }
  }
  marginal.total = total.value();
  return marginal;
}

// Exact law of a k-ary report vector, indexed in base k with contributor 0 as
// the least significant digit. Averaged over every pairing when `pairing` is
// unset.
inline absl::StatusOr<std::vector<double>> EnumerateKaryReports(
    std::span<const int> values, const PerturbParams& params,
    const std::optional<Pairing>& pairing = std::nullopt) {
  const size_t n = values.size();
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  if (n < 2) return absl::InvalidArgumentError("need at least two contributors");
  const size_t k = static_cast<size_t>(params.k);
  double outcomes = std::pow(static_cast<double>(k), static_cast<double>(n));
  if (outcomes > 1 << 20) {
    return absl::OutOfRangeError("k-ary enumeration limited to 2^20 outcomes");
  }
  for (int value : values) {
    if (value < 0 || value >= params.k) {
      return absl::InvalidArgumentError("value outside the domain");
    }
  }
  std::vector<size_t> place(n, 1);
  for (size_t i = 1; i < n; ++i) place[i] = place[i - 1] * k;
  const size_t size = place[n - 1] * k;
  const KaryJoint joint = KaryJointProbabilities(params);

  auto under = [&](const Pairing& each) {
    std::vector<double> dist(size, 0.0);
    dist[0] = 1.0;
    for (const auto& [a, b] : each.pairs) {
      std::vector<double> next(size, 0.0);
      for (size_t index = 0; index < size; ++index) {
        if (dist[index] == 0.0) continue;
        for (size_t ra = 0; ra < k; ++ra) {
          for (size_t rb = 0; rb < k; ++rb) {
            const bool ta = static_cast<int>(ra) == values[a];
            const bool tb = static_cast<int>(rb) == values[b];
            const double mass = ta && tb   ? joint.both
                                : ta       ? joint.first_only
                                : tb       ? joint.second_only
                                           : joint.neither;
            next[index + ra * place[a] + rb * place[b]] += dist[index] * mass;
          }
        }
      }
      dist.swap(next);
    }
    if (each.leftover) {
      const size_t i = *each.leftover;
      std::vector<double> next(size, 0.0);
      for (size_t index = 0; index < size; ++index) {
        if (dist[index] == 0.0) continue;
        for (size_t r = 0; r < k; ++r) {
          const double mass = static_cast<int>(r) == values[i] ? params.p : params.q;
          next[index + r * place[i]] += dist[index] * mass;
        }
      }
      dist.swap(next);
    }
    return dist;
  };

  if (pairing) {
    if (absl::Status status = ValidatePairing(*pairing, n); !status.ok()) return status;
    return under(*pairing);
  }
  const std::vector<Pairing> pairings = EnumeratePairings(n);
  const double weight = 1.0 / static_cast<double>(pairings.size());
  std::vector<KahanSum> mixture(size);
  for (const Pairing& each : pairings) {
    const std::vector<double> dist = under(each);
    for (size_t index = 0; index < size; ++index) {
      if (dist[index] != 0.0) mixture[index].Add(weight * dist[index]);
    }
  }
  std::vector<double> result(size);
  for (size_t index = 0; index < size; ++index) result[index] = mixture[index].value();
  return result;
}

// Exact E[(I_v - n q) / (p - q)] under a k-ary report law from
// EnumerateKaryReports.
inline double ExactKaryEstimatorMean(std::span<const double> dist, size_t n, int k,
                                     int value, double p, double q) {
  KahanSum mean;
  for (size_t index = 0; index < dist.size(); ++index) {
    if (dist[index] == 0.0) continue;
    size_t rest = index;
    size_t count = 0;
    for (size_t i = 0; i < n; ++i) {
      if (static_cast<int>(rest % static_cast<size_t>(k)) == value) ++count;
      rest /= static_cast<size_t>(k);
    }
    mean.Add(dist[index] * (static_cast<double>(count) - static_cast<double>(n) * q) /
             (p - q));
  }
  return mean.value();
}

// How pairings are weighted when conditioning on the colluders' truthfulness.
enum class PairingWeighting {
  // Each pairing keeps its uniform prior weight, so the chance that the
  // target's peer colludes stays m / (n - 1). This is the model under which
  // the collusion bound in privacy.h is stated.
  kPrior,
  // Pairings are reweighted by the likelihood of the observed colluder
  // truthfulness (full Bayesian conditioning).
  kPosterior,
};

struct PrivacyRatio {
  double ratio = 1.0;
  // Colluder truthfulness pattern attaining the ratio; bit c refers to
  // colluders[c].
  uint32_t worst_pattern = 0;
};

// Worst-case Pr[M(x) = y | T_c] / Pr[M(x') = y | T_c] for `target`, maximized
// over x, x', y and every truthfulness pattern T_c of `colluders` with positive
// probability. The truthfulness vector of the whole cohort is enumerated for
// every pairing; the ratio does not depend on the true values.
inline absl::StatusOr<PrivacyRatio> ExactPrivacyRatio(
    size_t n, const PerturbParams& params, std::span<const size_t> colluders,
    size_t target, PairingWeighting weighting = PairingWeighting::kPrior) {
  if (n < 2 || n > kMaxPrivacyEnumeration) {
    return absl::OutOfRangeError(absl::StrCat(
        "privacy enumeration supports 2 <= n <= ", kMaxPrivacyEnumeration, ", got ", n));
  }
  if (target >= n) return absl::InvalidArgumentError("target outside the cohort");
  std::vector<bool> is_colluder(n, false);
  for (size_t c : colluders) {
    if (c >= n || is_colluder[c]) {
      return absl::InvalidArgumentError("colluders must be distinct cohort indices");
    }
    if (c == target) return absl::InvalidArgumentError("target is one of the colluders");
    is_colluder[c] = true;
  }
  auto table = MakeJointTable(params);
  if (!table.ok()) return table.status();
  const double cells[2][2] = {{table->p00, table->p01}, {table->p10, table->p11}};

  const size_t patterns = size_t{1} << colluders.size();
  auto pattern_of = [&](size_t truth) {
    uint32_t pattern = 0;
    for (size_t c = 0; c < colluders.size(); ++c) {
      pattern |= static_cast<uint32_t>((truth >> colluders[c]) & 1U) << c;
    }
    return pattern;
  };

  const std::vector<Pairing> pairings = EnumeratePairings(n);
  // Per pattern: prior-weighted sum of Pr[T_i = 1 | pattern, pairing] and the
  // number of pairings contributing; posterior sums of joint and evidence.
  std::vector<KahanSum> conditional_sum(patterns);
  std::vector<size_t> contributing(patterns, 0);
  std::vector<KahanSum> joint_sum(patterns);
  std::vector<KahanSum> evidence_sum(patterns);
  for (const Pairing& pairing : pairings) {
    std::vector<double> evidence(patterns, 0.0);
    std::vector<double> joint(patterns, 0.0);
    for (size_t truth = 0; truth < (size_t{1} << n); ++truth) {
      double mass = 1.0;
      for (const auto& [a, b] : pairing.pairs) {
        mass *= cells[(truth >> a) & 1U][(truth >> b) & 1U];
      }
      if (pairing.leftover) {
        mass *= ((truth >> *pairing.leftover) & 1U) ? params.p : params.q;
      }
      if (mass == 0.0) continue;
      const uint32_t pattern = pattern_of(truth);
      evidence[pattern] += mass;
      if ((truth >> target) & 1U) joint[pattern] += mass;
    }
    for (size_t pattern = 0; pattern < patterns; ++pattern) {
      joint_sum[pattern].Add(joint[pattern]);
      evidence_sum[pattern].Add(evidence[pattern]);
      if (evidence[pattern] > 0.0) {
        conditional_sum[pattern].Add(joint[pattern] / evidence[pattern]);
        ++contributing[pattern];
      }
    }
  }

  PrivacyRatio worst;
  for (size_t pattern = 0; pattern < patterns; ++pattern) {
    double truthful;
    if (weighting == PairingWeighting::kPrior) {
      // Pairings under which the pattern is impossible drop out.
      if (contributing[pattern] == 0) continue;
      truthful = conditional_sum[pattern].value() / static_cast<double>(contributing[pattern]);
    } else {
      if (!(evidence_sum[pattern].value() > 0.0)) continue;
      truthful = joint_sum[pattern].value() / evidence_sum[pattern].value();
    }
    const double untruthful = 1.0 - truthful;
    double ratio;
    if (truthful <= 0.0 || untruthful <= 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    } else {
      ratio = std::max(truthful / untruthful, untruthful / truthful);
    }
    if (ratio > worst.ratio) {
      worst.ratio = ratio;
      worst.worst_pattern = static_cast<uint32_t>(pattern);
    }
  }
  return worst;
}

}  // namespace jrr::oracle

#endif  // JRR_ORACLE_H_
