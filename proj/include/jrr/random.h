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

// Random-state plumbing. Every stochastic operation in the library takes an
// explicit `Rng&`; given the same seed sequence, outputs are bit-reproducible
// on a given standard library.

#ifndef JRR_RANDOM_H_
#define JRR_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace jrr {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a child seed from a master seed and a path of indices, e.g.
// (sweep index, mechanism, trial index). Distinct paths give unrelated seeds.
inline uint64_t DeriveSeed(uint64_t master, std::initializer_list<uint64_t> path) {
  uint64_t h = Mix64(master);
  for (uint64_t component : path) {
    h = Mix64(h ^ Mix64(component + 0x632be59bd9b4e019ULL));
  }
  return h;
}

inline Rng MakeRng(uint64_t seed) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)};
  return Rng(seq);
}

// Uniform double in [0, 1) built from the top 53 bits, so the mapping from the
// engine's output stream does not depend on the standard library.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool Bernoulli(Rng& rng, double probability) {
  return UniformUnit(rng) < probability;
}

}  // namespace jrr

#endif  // JRR_RANDOM_H_
