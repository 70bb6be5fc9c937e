// Copyright 2026 The dsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSIM_RNG_HPP
#define DSIM_RNG_HPP

#include <cstdint>

namespace dsim {

// Deterministic, platform-independent RNG stack. std::normal_distribution is
// implementation-defined, so Gaussians come from an explicit Box-Muller on a
// xoshiro256++ stream; streams are split by hashing (seed, index, channel).

uint64_t splitmix64_next(uint64_t& state);

// Collision-resistant stream id for (master_seed, trajectory index, channel).
uint64_t derive_stream_seed(uint64_t master_seed, uint64_t index, uint64_t channel);

struct Xoshiro256pp {
  uint64_t s[4];

  static Xoshiro256pp seeded(uint64_t seed);
  uint64_t next();
  double uniform01();         // [0, 1)
  double uniform01_open();    // (0, 1]
};

// Standard-normal generator (Box-Muller, pairwise cached).
struct GaussianGen {
  Xoshiro256pp rng;
  bool has_cache = false;
  double cache = 0.0;

  static GaussianGen seeded(uint64_t seed) { return GaussianGen{Xoshiro256pp::seeded(seed)}; }
  explicit GaussianGen(Xoshiro256pp r) : rng(r) {}
  double next();
};

}  // namespace dsim

#endif  // DSIM_RNG_HPP
