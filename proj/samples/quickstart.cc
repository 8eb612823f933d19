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

// Minimal end-to-end use of the library: choose (p, rho) for a privacy
// budget, perturb a synthetic cohort jointly in pairs, and estimate n1.

#include <cmath>
#include <cstdio>

#include "jrr/jrr.h"

int main() {
  const size_t n = 10000;
  const size_t n1 = 1000;
  const jrr::PrivacyBudget budget{/*epsilon=*/0.1, /*m_max=*/5, n};

  auto found = jrr::SearchParams(budget);
  if (!found.ok() || !found->has_value()) {
    std::fprintf(stderr, "parameter search failed\n");
    return 1;
  }
  const jrr::PerturbParams params = *jrr::MakeBinaryParams((*found)->p, (*found)->rho);
  std::printf("p = %.6f, rho = %.6f, effective epsilon at M: %.6f\n", params.p, params.rho,
              *jrr::EffectiveEpsilon(params.p, params.rho, n, budget.m_max));

  const std::vector<jrr::Bit> values = *jrr::Synthesize(n, n1, /*seed=*/7);
  jrr::Rng rng = jrr::MakeRng(8);
  const jrr::Pairing pairing = *jrr::RandomPairing(n, rng);
  const std::vector<jrr::Bit> reports =
      *jrr::PerturbCohort(values, pairing, params, jrr::PerturbMode::kSampler, rng);

  size_t ones = 0;
  for (jrr::Bit report : reports) ones += report;
  const double estimate = *jrr::Estimate(static_cast<double>(ones), n, params.p, params.q);
  const double sd = std::sqrt(*jrr::JrrVariance(n, n1, params.p, params.rho));
  std::printf("true n1 = %zu, estimate = %.1f (closed-form sd %.1f)\n", n1, estimate, sd);
  return 0;
}
