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

#include "jrr/oracle.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "jrr/estimation.h"
#include "jrr/grouping.h"
#include "jrr/privacy.h"
#include "jrr/random.h"

namespace jrr::oracle {
namespace {

size_t DoubleFactorial(size_t n) { return n <= 1 ? 1 : n * DoubleFactorial(n - 2); }

TEST(EnumeratePairingsTest, Counts) {
  EXPECT_TRUE(EnumeratePairings(1).empty());
  for (size_t n = 2; n <= 10; ++n) {
    const std::vector<Pairing> all = EnumeratePairings(n);
    const size_t expected = n % 2 == 0 ? DoubleFactorial(n - 1) : n * DoubleFactorial(n - 2);
    EXPECT_EQ(all.size(), expected) << n;
    for (const Pairing& pairing : all) EXPECT_TRUE(ValidatePairing(pairing, n).ok());
  }
}

TEST(EnumerateReportsTest, WorkedTableSinglePairing) {
  Pairing pairing;
  pairing.pairs = {{0, 1}};
  const std::vector<Bit> values = {1, 1};
  const ExactDistribution dist =
      *EnumerateReports(values, *MakeBinaryParams(0.8, -0.1875), pairing);
  EXPECT_NEAR(dist.probability[0b11], 0.61, 1e-15);
  EXPECT_NEAR(dist.probability[0b00], 0.01, 1e-15);
  EXPECT_EQ(dist.pairing_count, 1u);
  EXPECT_FALSE(dist.pairing_averaged);
}

TEST(EnumerateReportsTest, PEqualOneIsPointMass) {
  const std::vector<Bit> values = {1, 0, 0, 1, 1};
  const ExactDistribution dist = *EnumerateReports(values, *MakeBinaryParams(1.0, 0.0));
  EXPECT_NEAR(dist.probability[0b11001], 1.0, 1e-15);
  EXPECT_EQ(dist.Support().size(), 1u);
  EXPECT_EQ(dist.Support()[0].first, values);
}

TEST(EnumerateReportsTest, ZeroRhoIsProduct) {
  const std::vector<Bit> values = {1, 0, 1, 1};
  const double p = 0.7;
  const ExactDistribution dist = *EnumerateReports(values, *MakeBinaryParams(p, 0.0));
  for (size_t mask = 0; mask < 16; ++mask) {
    double product = 1.0;
    for (size_t i = 0; i < 4; ++i) product *= ((mask >> i) & 1U) == values[i] ? p : 1 - p;
    EXPECT_NEAR(dist.probability[mask], product, 1e-15);
  }
}

TEST(EnumerateReportsTest, TotalsAndCaps) {
  const std::vector<Bit> values = {1, 0, 1, 1, 0, 0, 1};
  const ExactDistribution dist = *EnumerateReports(values, *MakeBinaryParams(0.75, -0.3));
  EXPECT_NEAR(dist.Total(), 1.0, 1e-12);
  EXPECT_TRUE(dist.pairing_averaged);
  EXPECT_EQ(dist.pairing_count, 105u);
  EXPECT_FALSE(EnumerateReports(std::vector<Bit>(13, 0), *MakeBinaryParams(0.75, 0.0)).ok());
  EXPECT_FALSE(EnumerateReports(std::vector<Bit>{1}, *MakeBinaryParams(0.75, 0.0)).ok());
  EXPECT_FALSE(EnumerateReports(std::vector<Bit>{1, 2}, *MakeBinaryParams(0.75, 0.0)).ok());
}

TEST(MomentsTest, WorkedExamples) {
  const std::vector<Bit> values = {1, 1};
  const Moments rr =
      ExactEstimatorMoments(*EnumerateReports(values, *MakeBinaryParams(0.8, 0.0)), 0.8, 0.2);
  EXPECT_NEAR(rr.mean, 2.0, 1e-12);
  EXPECT_NEAR(rr.variance, 0.8888888888888888, 1e-10);
  const Moments jrr = ExactEstimatorMoments(
      *EnumerateReports(values, *MakeBinaryParams(0.8, -0.1875)), 0.8, 0.2);
  EXPECT_NEAR(jrr.mean, 2.0, 1e-12);
  EXPECT_NEAR(jrr.variance, 0.7222222222222222, 1e-10);
}

TEST(MomentsTest, SixContributorsMatchClosedForm) {
  const std::vector<Bit> values = {1, 1, 1, 0, 0, 0};
  const Moments moments =
      ExactEstimatorMoments(*EnumerateReports(values, *MakeBinaryParams(0.7, -0.3)), 0.7, 0.3);
  EXPECT_NEAR(moments.mean, 3.0, 1e-10);
  EXPECT_NEAR(moments.variance, *JrrVariance(6, 3, 0.7, -0.3), 1e-10);
}

TEST(MomentsTest, FixedPairingVarianceDecomposesByGroupType) {
  const PerturbParams params = *MakeBinaryParams(0.75, -0.2);
  const std::vector<Bit> values = {1, 1, 0, 1, 0, 0, 1, 0};
  Pairing pairing;
  pairing.pairs = {{0, 1}, {2, 3}, {4, 5}, {6, 7}};
  const Moments moments =
      ExactEstimatorMoments(*EnumerateReports(values, params, pairing), 0.75, 0.25);
  const GroupTypeCounts counts = CountGroupTypes(values, pairing);
  EXPECT_EQ(counts.both_one, 1u);
  EXPECT_EQ(counts.mixed, 2u);
  EXPECT_EQ(counts.both_zero, 1u);
  const GroupTypeVariances v = GroupVariancesByEnumeration(*MakeJointTable(params));
  const double pq = 0.75 * 0.25;
  EXPECT_NEAR(v.both_one, 2 * pq * (1 + params.rho), 1e-15);
  EXPECT_NEAR(v.mixed, 2 * pq * (1 - params.rho), 1e-15);
  EXPECT_NEAR(v.both_zero, 2 * pq * (1 + params.rho), 1e-15);
  const double var_i1 =
      counts.both_one * v.both_one + counts.mixed * v.mixed + counts.both_zero * v.both_zero;
  EXPECT_NEAR(moments.variance, var_i1 / 0.25, 1e-10);
}

TEST(MomentsTest, OddCohortUnbiased) {
  const std::vector<Bit> values = {1, 0, 1, 1, 0};
  const Moments moments =
      ExactEstimatorMoments(*EnumerateReports(values, *MakeBinaryParams(0.6, -0.5)), 0.6, 0.4);
  EXPECT_NEAR(moments.mean, 3.0, 1e-10);
}

TEST(MonteCarloTest, EmpiricalFrequenciesMatchEnumeration) {
  const PerturbParams params = *MakeBinaryParams(0.7, -0.3);
  const std::vector<Bit> values = {1, 0, 1, 1};
  const ExactDistribution dist = *EnumerateReports(values, params);
  Rng rng = MakeRng(2024);
  const int draws = 1000000;
  std::vector<int> counts(16, 0);
  for (int i = 0; i < draws; ++i) {
    const Pairing pairing = *RandomPairing(4, rng);
    const std::vector<Bit> reports =
        *PerturbCohort(values, pairing, params, PerturbMode::kDirectJoint, rng);
    size_t mask = 0;
    for (size_t j = 0; j < 4; ++j) mask |= size_t(reports[j]) << j;
    ++counts[mask];
  }
  for (size_t mask = 0; mask < 16; ++mask) {
    const double prob = dist.probability[mask];
    const double se = std::sqrt(prob * (1 - prob) / draws);
    EXPECT_NEAR(counts[mask] / double(draws), prob, 4 * se + 1e-12) << mask;
  }
}

TEST(SamplerPathTableTest, ReproducesJointTable) {
  for (double p : {0.55, 0.7, 0.8, 0.95}) {
    for (double rho : {1 - 1 / p, 0.5 * (1 - 1 / p), 0.0}) {
      const PerturbParams params = *MakeBinaryParams(p, rho);
      const JointTable direct = *MakeJointTable(params);
      const JointTable sampled = SamplerPathTable(*MakeSamplerConfig(params));
      EXPECT_NEAR(sampled.p11, direct.p11, 1e-12);
      EXPECT_NEAR(sampled.p10, direct.p10, 1e-12);
      EXPECT_NEAR(sampled.p01, direct.p01, 1e-12);
      EXPECT_NEAR(sampled.p00, direct.p00, 1e-12);
    }
  }
}

TEST(KaryTest, MarginalsByEnumeration) {
  for (int k : {2, 3, 5}) {
    const PerturbParams params = *MakeKaryParams(0.6, -0.3, k);
    const KaryMarginal marginal = *KaryMarginalByEnumeration(params, 0, k - 1);
    EXPECT_NEAR(marginal.total, 1.0, 1e-12);
    EXPECT_NEAR(marginal.truthful, params.p, 1e-12);
    for (double other : marginal.other_values) EXPECT_NEAR(other, params.q, 1e-12);
  }
}

TEST(KaryTest, EstimatorUnbiased) {
  const int k = 3;
  const PerturbParams params = *MakeKaryParams(0.6, -0.4, k);
  const std::vector<int> values = {0, 2, 2, 1};
  const std::vector<double> dist = *EnumerateKaryReports(values, params);
  double total = 0;
  for (double mass : dist) total += mass;
  EXPECT_NEAR(total, 1.0, 1e-12);
  const double truth[3] = {1, 1, 2};
  for (int v = 0; v < k; ++v) {
    EXPECT_NEAR(ExactKaryEstimatorMean(dist, 4, k, v, params.p, params.q), truth[v], 1e-10);
  }
}

TEST(PrivacyRatioTest, NoColludersIsRr) {
  const std::vector<size_t> none;
  for (size_t n = 2; n <= 6; ++n) {
    const PrivacyRatio ratio = *ExactPrivacyRatio(n, *MakeBinaryParams(0.7, -0.3), none, 0);
    EXPECT_NEAR(ratio.ratio, 0.7 / 0.3, 1e-12);
  }
}

TEST(PrivacyRatioTest, WithinBoundForSmallCohort) {
  const PerturbParams params = *MakeBinaryParams(0.7, -0.3);
  const std::vector<size_t> colluders = {2};
  const PrivacyRatio ratio = *ExactPrivacyRatio(4, params, colluders, 0);
  const double bound = std::exp(*EffectiveEpsilon(0.7, -0.3, 4, 1));
  EXPECT_NEAR(bound, (0.91 + 2 * 0.7) / (0.09 + 2 * 0.3), 1e-12);
  EXPECT_LE(ratio.ratio, bound + 1e-10);
}

TEST(PrivacyRatioTest, GrowsWithColluderSet) {
  const PerturbParams params = *MakeBinaryParams(0.8, -0.2);
  for (size_t n = 3; n <= 6; ++n) {
    double previous = 0.0;
    std::vector<size_t> colluders;
    for (size_t c = 1; c < n; ++c) {
      colluders.push_back(c);
      const double ratio = ExactPrivacyRatio(n, params, colluders, 0)->ratio;
      EXPECT_GE(ratio, previous - 1e-12) << n << " " << c;
      previous = ratio;
    }
  }
}

TEST(PrivacyRatioTest, PosteriorConditioningCanExceedBound) {
  const PerturbParams params = *MakeBinaryParams(0.7, -0.3);
  const std::vector<size_t> colluders = {1, 2};
  const double bound = std::exp(*EffectiveEpsilon(0.7, -0.3, 4, 2));
  const PrivacyRatio prior = *ExactPrivacyRatio(4, params, colluders, 0);
  const PrivacyRatio posterior =
      *ExactPrivacyRatio(4, params, colluders, 0, PairingWeighting::kPosterior);
  EXPECT_NEAR(prior.ratio, bound, 1e-10);
  EXPECT_GT(posterior.ratio, bound);
  const double q = 0.3;
  const double rho = -0.3;
  const double peer_colludes = 2 * q / (3 * q + rho * 0.7);
  const double truthful = 0.7 - peer_colludes * rho * 0.7;
  EXPECT_NEAR(posterior.ratio, truthful / (1 - truthful), 1e-10);
  EXPECT_EQ(posterior.worst_pattern, 0u);
}

TEST(PrivacyRatioTest, Errors) {
  const PerturbParams params = *MakeBinaryParams(0.7, -0.3);
  EXPECT_FALSE(ExactPrivacyRatio(7, params, std::vector<size_t>{1}, 0).ok());
  EXPECT_FALSE(ExactPrivacyRatio(4, params, std::vector<size_t>{0}, 0).ok());
  EXPECT_FALSE(ExactPrivacyRatio(4, params, std::vector<size_t>{1, 1}, 0).ok());
  EXPECT_FALSE(ExactPrivacyRatio(4, params, std::vector<size_t>{4}, 0).ok());
  EXPECT_FALSE(ExactPrivacyRatio(4, params, std::vector<size_t>{1}, 4).ok());
}

}  // namespace
}  // namespace jrr::oracle
