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

#ifndef DSIM_LINALG_HPP
#define DSIM_LINALG_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>

namespace dsim {

using Complex = std::complex<double>;
using Matrix4 = Eigen::Matrix4cd;
using Vector4 = Eigen::Vector4cd;

// Fixed basis order for the four-level system.
// |0> is the clock state, |0'> the auxiliary clock state, |±1> the Zeeman pair.
inline constexpr int kIdx0 = 0;      // |0>
inline constexpr int kIdxMinus = 1;  // |-1>
inline constexpr int kIdx0p = 2;     // |0'>
inline constexpr int kIdxPlus = 3;   // |+1>

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = kTwoPi / 2.0;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

// Normalized pure state of the four-level system.
struct StateVector {
  Vector4 a = Vector4::Zero();

  double norm() const { return a.norm(); }
  std::array<double, 4> populations() const {
    return {std::norm(a[0]), std::norm(a[1]), std::norm(a[2]), std::norm(a[3])};
  }
  double population(int idx) const { return std::norm(a[idx]); }

  static StateVector basis(int idx);
  // Dressed states in the bare basis.
  static StateVector bright();  // (|+1> + |-1>)/sqrt(2)
  static StateVector dark();    // (|+1> - |-1>)/sqrt(2)
  static StateVector up();      // (|D> + |0>)/sqrt(2)
  static StateVector down();    // (|D> - |0>)/sqrt(2)
};

// Throws std::invalid_argument if |norm - 1| > 1e-9.
StateVector make_state(const Vector4& amplitudes);

enum class OpTag { general, hermitian, unitary };

struct Operator {
  Matrix4 m = Matrix4::Zero();
  OpTag tag = OpTag::general;
};

// Tagging constructors; both validate their claim to 1e-12 and throw otherwise.
Operator hermitian_op(const Matrix4& m);
Operator unitary_op(const Matrix4& m);

// Eigen-decomposition of a Hermitian operator.
// values ascending; vectors orthonormal, one per column, with the
// largest-magnitude component of each rotated to be real and positive.
struct Spectrum {
  std::array<double, 4> values{};
  Matrix4 vectors = Matrix4::Zero();
};

Spectrum eig_hermitian(const Operator& h);

// exp(-i H dt) for Hermitian H, built from the spectral decomposition.
Operator expm_step(const Operator& h, double dt);

// U |psi>; requires tag == unitary.
StateVector apply(const Operator& u, const StateVector& psi);

Complex inner(const StateVector& x, const StateVector& y);

}  // namespace dsim

#endif  // DSIM_LINALG_HPP
