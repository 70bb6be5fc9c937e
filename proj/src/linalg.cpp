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

#include "dsim/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace dsim {

StateVector StateVector::basis(int idx) {
  if (idx < 0 || idx > 3) throw std::invalid_argument("basis index out of range");
  StateVector s;
  s.a[idx] = 1.0;
  return s;
}

StateVector StateVector::bright() {
  StateVector s;
  s.a[kIdxPlus] = kInvSqrt2;
  s.a[kIdxMinus] = kInvSqrt2;
  return s;
}

StateVector StateVector::dark() {
  StateVector s;
  s.a[kIdxPlus] = kInvSqrt2;
  s.a[kIdxMinus] = -kInvSqrt2;
  return s;
}

StateVector StateVector::up() {
  StateVector s;
  s.a[kIdxPlus] = 0.5;
  s.a[kIdxMinus] = -0.5;
  s.a[kIdx0] = kInvSqrt2;
  return s;
}

StateVector StateVector::down() {
  StateVector s;
  s.a[kIdxPlus] = 0.5;
  s.a[kIdxMinus] = -0.5;
  s.a[kIdx0] = -kInvSqrt2;
  return s;
}

StateVector make_state(const Vector4& amplitudes) {
  const double n = amplitudes.norm();
  if (std::abs(n - 1.0) > 1e-9)
    throw std::invalid_argument("state norm deviates from 1 by more than 1e-9");
  StateVector s;
  s.a = amplitudes;
  return s;
}

Operator hermitian_op(const Matrix4& m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("matrix is not hermitian");
  return Operator{m, OpTag::hermitian};
}

Operator unitary_op(const Matrix4& m) {
  if ((m.adjoint() * m - Matrix4::Identity()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("matrix is not unitary");
  return Operator{m, OpTag::unitary};
}

Spectrum eig_hermitian(const Operator& h) {
  if (h.tag != OpTag::hermitian)
    throw std::invalid_argument("eig_hermitian requires a hermitian-tagged operator");
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(h.m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");

  Spectrum sp;
  Matrix4 vecs = solver.eigenvectors();
  for (int k = 0; k < 4; ++k) {
    sp.values[k] = solver.eigenvalues()[k];
    // Phase convention: rotate each vector so its largest-|.| component is
    // real and positive (first such index wins on ties).
    int imax = 0;
    double amax = -1.0;
    for (int i = 0; i < 4; ++i) {
      const double mag = std::abs(vecs(i, k));
      if (mag > amax + 1e-15) {
        amax = mag;
        imax = i;
      }
    }
    const Complex pivot = vecs(imax, k);
    if (std::abs(pivot) > 0.0) vecs.col(k) *= std::conj(pivot) / std::abs(pivot);
  }
  sp.vectors = vecs;
  return sp;
}

Operator expm_step(const Operator& h, double dt) {
  const Spectrum sp = eig_hermitian(h);
  Matrix4 phases = Matrix4::Zero();
  for (int k = 0; k < 4; ++k)
    phases(k, k) = std::exp(Complex(0.0, -sp.values[k] * dt));
  Matrix4 u = sp.vectors * phases * sp.vectors.adjoint();
  return Operator{u, OpTag::unitary};
}

StateVector apply(const Operator& u, const StateVector& psi) {
  if (u.tag != OpTag::unitary)
    throw std::invalid_argument("apply requires a unitary-tagged operator");
  StateVector out;
  out.a = u.m * psi.a;
  return out;
}

Complex inner(const StateVector& x, const StateVector& y) {
  return x.a.dot(y.a);  // Eigen's dot conjugates the left argument
}

}  // namespace dsim
