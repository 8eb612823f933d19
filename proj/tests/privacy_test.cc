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

#include "jrr/privacy.h"

#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "jrr/estimation.h"

namespace jrr {
namespace {

TEST(PExtremesTest, Examples) {
  const ProbabilityExtremes a = PExtremes(0.75, -0.2);
  EXPECT_NEAR(a.p_max, 0.9, 1e-15);
  EXPECT_NEAR(a.p_min, 0.1, 1e-15);
  const ProbabilityExtremes b = PExtremes(0.6, 0.0);
  EXPECT_NEAR(b.p_max, 0.6, 1e-15);
  EXPECT_NEAR(b.p_min, 0.4, 1e-15);
  const ProbabilityExtremes c = PExtremes(0.8, 1.0);
  EXPECT_NEAR(c.p_max, 1.0, 1e-15);
  EXPECT_NEAR(c.p_min, 0.0, 1e-15);
}

TEST(EffectiveEpsilonTest, NoColludersIsRr) {
  for (size_t n : {2u, 7u, 10000u}) {
    for (double rho : {-0.25, 0.0, 0.5}) {
      EXPECT_NEAR(*EffectiveEpsilon(0.8, rho, n, 0), std::log(4.0), 1e-12);
    }
  }
}

TEST(EffectiveEpsilonTest, Example) {
  EXPECT_NEAR(*EffectiveEpsilon(0.75, -0.2, 10000, 5), std::log(7500.0 / 2499.0), 1e-9);
  EXPECT_NEAR(*EffectiveEpsilon(0.75, -0.2, 10000, 5), 1.0990, 5e-5);
}

TEST(EffectiveEpsilonTest, InfiniteWhenDenominatorVanishes) {
  // All peers collude and rho = 1 makes p_min = 0.
  const double eps = *EffectiveEpsilon(0.8, 1.0, 2, 1);
  EXPECT_TRUE(std::isinf(eps));
}

TEST(EffectiveEpsilonTest, Errors) {
  EXPECT_FALSE(EffectiveEpsilon(0.8, 0.0, 1, 0).ok());
  EXPECT_FALSE(EffectiveEpsilon(0.8, 0.0, 5, 5).ok());
}

TEST(EffectiveEpsilonTest, NonDecreasingInM) {
  for (double p = 0.55; p < 1.0; p += 0.05) {
    for (double rho = 1 - 1 / p; rho <= 1.0; rho += 0.05) {
      double previous = -std::numeric_limits<double>::infinity();
      for (size_t m = 0; m <= 19; ++m) {
        const double eps = *EffectiveEpsilon(p, rho, 20, m);
        EXPECT_GE(eps, previous - 1e-12) << p << " " << rho << " " << m;
        previous = eps;
      }
    }
  }
  EXPECT_GE(*EffectiveEpsilon(0.7, -0.3, 1000, 10), *EffectiveEpsilon(0.7, -0.3, 1000, 5));
}

TEST(IsFeasibleTest, Examples) {
  for (double eps : {0.01, 0.1, 1.0, 3.0}) {
    const double p = std::exp(eps) / (1 + std::exp(eps));
    for (size_t m : {0u, 5u, 99u}) {
      EXPECT_TRUE(IsFeasible(p, 0.0, {eps, m, 100})) << eps << " " << m;
    }
  }
  EXPECT_FALSE(IsFeasible(1.0, 0.0, {1.0, 5, 100}));
  EXPECT_FALSE(IsFeasible(0.8, -0.3, {10.0, 5, 100}));
  EXPECT_FALSE(IsFeasible(0.5, 0.0, {10.0, 5, 100}));
  EXPECT_FALSE(IsFeasible(0.8, 0.0, {1.0, 100, 100}));
}

TEST(SearchParamsTest, DefaultSetting) {
  const PrivacyBudget budget{0.1, 5, 10000};
  const auto found = *SearchParams(budget);
  ASSERT_TRUE(found.has_value());
  const double p_rr = std::exp(0.1) / (1 + std::exp(0.1));
  EXPECT_GT(found->p, 0.5);
  EXPECT_LT(found->p, p_rr);
  EXPECT_LT(found->rho, 0.0);
  EXPECT_TRUE(IsFeasible(found->p, found->rho, budget));
  EXPECT_EQ(found->p, SearchGridP(0.1, {}, found->p_step));
  EXPECT_EQ(found->rho, SearchGridRho(found->p, {}, found->rho_step));
  for (size_t j = 0; j < found->rho_step; ++j) {
    EXPECT_FALSE(IsFeasible(found->p, SearchGridRho(found->p, {}, j), budget)) << j;
  }
}

TEST(SearchParamsTest, GridDominance) {
  const PrivacyBudget budget{0.5, 3, 200};
  const SearchConfig config{1e-3, 1e-3};
  const auto found = *SearchParams(budget, config);
  ASSERT_TRUE(found.has_value());
  for (size_t i = 0; i <= found->p_step; ++i) {
    const double p = SearchGridP(budget.epsilon, config, i);
    for (size_t j = 0;; ++j) {
      const double rho = SearchGridRho(p, config, j);
      if (rho > found->rho + 1e-12 || rho > 1.0) break;
      if (i == found->p_step && j == found->rho_step) continue;
      EXPECT_FALSE(IsFeasible(p, rho, budget)) << p << " " << rho;
    }
  }
}

TEST(SearchParamsTest, AllPeersColludingDegradesToRr) {
  const PrivacyBudget budget{0.1, 999, 1000};
  const auto found = *SearchParams(budget);
  ASSERT_TRUE(found.has_value());
  EXPECT_NEAR(found->rho, 0.0, 2e-4);
  const double p_rr = std::exp(0.1) / (1 + std::exp(0.1));
  EXPECT_NEAR(found->p, p_rr, 2e-4);
}

TEST(SearchParamsTest, JrrBeatsRrAtDefaults) {
  const auto found = *SearchParams({0.1, 5, 10000});
  const double p_rr = std::exp(0.1) / (1 + std::exp(0.1));
  EXPECT_LT(*JrrVariance(10000, 1000, found->p, found->rho), RrVariance(10000, p_rr));
}

TEST(SearchParamsTest, Errors) {
  EXPECT_FALSE(SearchParams({0.0, 5, 100}).ok());
  EXPECT_FALSE(SearchParams({-1.0, 5, 100}).ok());
  EXPECT_FALSE(SearchParams({0.1, 100, 100}).ok());
  EXPECT_FALSE(SearchParams({0.1, 5, 100}, {0.0, 1e-4}).ok());
}

TEST(SearchParamsTest, NoneOnTooCoarseGrid) {
  // The first grid p already sits at or below 1/2.
  const auto found = *SearchParams({0.01, 5, 100}, {0.01, 0.01});
  EXPECT_FALSE(found.has_value());
}

}  // namespace
}  // namespace jrr
