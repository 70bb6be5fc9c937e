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

#include "dsim/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "dsim/rng.hpp"

namespace dsim {

// ---------------------------------------------------------------- rng

uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t derive_stream_seed(uint64_t master_seed, uint64_t index, uint64_t channel) {
  uint64_t state = master_seed;
  uint64_t h = splitmix64_next(state);
  state ^= index * 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64_next(state);
  state ^= channel * 0xd1342543de82ef95ULL;
  h ^= splitmix64_next(state);
  return h;
}

Xoshiro256pp Xoshiro256pp::seeded(uint64_t seed) {
  Xoshiro256pp g;
  for (auto& word : g.s) word = splitmix64_next(seed);
  return g;
}

namespace {
inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

uint64_t Xoshiro256pp::next() {
  const uint64_t result = rotl(s[0] + s[3], 23) + s[0];
  const uint64_t t = s[1] << 17;
  s[2] ^= s[0];
  s[3] ^= s[1];
  s[1] ^= s[2];
  s[0] ^= s[3];
  s[2] ^= t;
  s[3] = rotl(s[3], 45);
  return result;
}

double Xoshiro256pp::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Xoshiro256pp::uniform01_open() {
  return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianGen::next() {
  if (has_cache) {
    has_cache = false;
    return cache;
  }
  const double u1 = rng.uniform01_open();
  const double u2 = rng.uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586 * u2;
  cache = r * std::sin(a);
  has_cache = true;
  return r * std::cos(a);
}

// ---------------------------------------------------------------- noise model

double NoiseModel::chi_delta(double t) const {
  const double x = t / tau_c;
  return sigma_delta * sigma_delta * tau_c * tau_c * (x + std::exp(-x) - 1.0);
}

double NoiseModel::sigma_for_bare_t2(double t2, double tau_c) {
  if (t2 <= 0.0 || tau_c <= 0.0)
    throw std::invalid_argument("sigma_for_bare_t2 requires positive t2 and tau_c");
  const double x = t2 / tau_c;
  return 1.0 / (tau_c * std::sqrt(x + std::exp(-x) - 1.0));
}

namespace {

void fill_ou(std::vector<double>& out, std::size_t count, double sigma, double tau,
             double dt, uint64_t seed) {
  out.assign(count, 0.0);
  if (sigma == 0.0) return;
  GaussianGen gen = GaussianGen::seeded(seed);
  const double decay = std::exp(-dt / tau);
  const double kick = sigma * std::sqrt(1.0 - decay * decay);
  double x = sigma * gen.next();  // stationary start
  out[0] = x;
  for (std::size_t k = 1; k < count; ++k) {
    x = x * decay + kick * gen.next();
    out[k] = x;
  }
}

}  // namespace

Trajectory sample_ou_trajectory(const NoiseModel& m, double duration, double dt,
                                uint64_t traj_index) {
  if (dt <= 0.0) throw std::invalid_argument("trajectory dt must be positive");
  if (duration < 0.0) throw std::invalid_argument("trajectory duration must be non-negative");
  if (m.enabled() && dt > m.tau_c / 10.0 + 1e-15)
    throw std::invalid_argument("trajectory dt must not exceed tau_c/10");

  // last node must land at or past `duration` so propagation can read it
  const auto count = static_cast<std::size_t>(std::ceil(duration / dt - 1e-9)) + 1;
  Trajectory traj;
  traj.dt = dt;
  fill_ou(traj.delta, count, m.sigma_delta, m.tau_c, dt,
          derive_stream_seed(m.master_seed, traj_index, 0));
  fill_ou(traj.eps, count, m.sigma_eps, m.tau_c, dt,
          derive_stream_seed(m.master_seed, traj_index, 1));
  return traj;
}

}  // namespace dsim
