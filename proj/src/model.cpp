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

#include "dsim/model.hpp"

#include <cmath>
#include <stdexcept>

namespace dsim {

void SystemParams::validate() const {
  if (omega < 0.0) throw std::invalid_argument("microwave Rabi frequency must be >= 0");
  if (lambda_plus <= 0.0 || lambda_minus <= 0.0)
    throw std::invalid_argument("Zeeman splittings must be positive");
  if (omega0 <= 0.0) throw std::invalid_argument("omega0 must be positive");
}

void SignalParams::validate() const {
  if (omega_g < 0.0) throw std::invalid_argument("signal Rabi frequency must be >= 0");
}

DressedTransform dressed_transform() {
  Matrix4 u = Matrix4::Zero();
  // rows: <B|, <0'|, <u|, <d| in bare components (|0>,|-1>,|0'>,|+1>).
  u(0, kIdxMinus) = kInvSqrt2;
  u(0, kIdxPlus) = kInvSqrt2;
  u(1, kIdx0p) = 1.0;
  u(2, kIdx0) = kInvSqrt2;
  u(2, kIdxMinus) = -0.5;
  u(2, kIdxPlus) = 0.5;
  u(3, kIdx0) = -kInvSqrt2;
  u(3, kIdxMinus) = -0.5;
  u(3, kIdxPlus) = 0.5;
  return DressedTransform{u};
}

Operator build_bare_hamiltonian(const SystemParams& p, const SignalParams& s,
                                double t, double delta) {
  p.validate();
  s.validate();
  if (s.target == RfTarget::dual)
    throw std::invalid_argument("lab-frame builder expects a single rf target");

  Matrix4 h = Matrix4::Zero();
  h(kIdx0, kIdx0) = p.omega0;
  h(kIdxMinus, kIdxMinus) = -p.lambda_minus - delta;
  h(kIdxPlus, kIdxPlus) = p.lambda_plus + delta;

  // Default microwave carriers sit on their transitions in this frame
  // (|0> sits above the Zeeman triplet at omega0).
  h(kIdxMinus, kIdx0) = p.omega * std::cos(p.carrier_minus() * t);
  h(kIdxPlus, kIdx0) = p.omega * std::cos(p.carrier_plus() * t + p.theta);

  // The rf amplitude carries a sqrt2 so that the dressed |B>-|0'> population
  // fringe of a single-tone drive runs at exactly omega_g.
  const bool on_plus = s.target == RfTarget::plus;
  const double w_rf = (on_plus ? p.lambda_plus : p.lambda_minus) + s.detuning;
  const double rf = std::sqrt(2.0) * s.omega_g * std::cos(w_rf * t + s.phi);
  if (on_plus)
    h(kIdxPlus, kIdx0p) = rf;
  else
    h(kIdxMinus, kIdx0p) = rf;

  h(kIdx0, kIdxMinus) = std::conj(h(kIdxMinus, kIdx0));
  h(kIdx0, kIdxPlus) = std::conj(h(kIdxPlus, kIdx0));
  h(kIdx0p, kIdxPlus) = std::conj(h(kIdxPlus, kIdx0p));
  h(kIdx0p, kIdxMinus) = std::conj(h(kIdxMinus, kIdx0p));
  return Operator{h, OpTag::hermitian};
}

Operator build_rwa_hamiltonian(const SystemParams& p, const SignalParams& s,
                               double delta, double eps) {
  p.validate();
  s.validate();

  Matrix4 h = Matrix4::Zero();
  // theta = pi realized as opposite channel signs, which places |u> on the
  // +Omega/sqrt2 branch: -(O/2)|-1><0| + (O/2)|+1><0| + h.c. = (O/sqrt2)|D><0| + h.c.
  const Complex mw(p.omega * 0.5, 0.0);
  h(kIdxMinus, kIdx0) = -mw;
  h(kIdx0, kIdxMinus) = -mw;
  h(kIdxPlus, kIdx0) = mw;
  h(kIdx0, kIdxPlus) = mw;

  // Signal coupling on |B><0'| with element omega_g/2; in bare components the
  // bright state splits evenly over |+1> and |-1>.
  const Complex rf(s.omega_g * 0.25 * std::sqrt(2.0), 0.0);  // (omega_g/2)/sqrt2
  h(kIdxPlus, kIdx0p) = rf;
  h(kIdx0p, kIdxPlus) = rf;
  h(kIdxMinus, kIdx0p) = rf;
  h(kIdx0p, kIdxMinus) = rf;

  // delta (|B><D| + h.c.) is diagonal in the bare basis.
  h(kIdxPlus, kIdxPlus) += delta;
  h(kIdxMinus, kIdxMinus) -= delta;

  h(kIdx0p, kIdx0p) = eps + s.detuning;
  return Operator{h, OpTag::hermitian};
}

ProtectionReport protection_analysis(const SystemParams& p, double delta) {
  p.validate();
  // With the rf off, |0'> decouples exactly and would sit degenerate with the
  // protected branch at zero; work in the remaining {|B>,|u>,|d>} block, which
  // is real symmetric:  <u|H|u> = -<d|H|d> = Omega/sqrt2,
  // <B|H|u> = <B|H|d> = delta/sqrt2.
  Eigen::Matrix3d h3 = Eigen::Matrix3d::Zero();
  const double c = delta * kInvSqrt2;
  h3(0, 1) = h3(1, 0) = c;
  h3(0, 2) = h3(2, 0) = c;
  h3(1, 1) = p.omega * kInvSqrt2;
  h3(2, 2) = -p.omega * kInvSqrt2;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h3);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("3x3 eigensolver failed");

  // The protected branch is the eigenvalue nearest zero; the other two sit at
  // +-sqrt(Omega^2/2 + delta^2), so it is unique whenever (Omega, delta) != 0.
  int kb = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(es.eigenvalues()[k]) < std::abs(es.eigenvalues()[kb])) kb = k;

  Eigen::Vector3d v = es.eigenvectors().col(kb);
  int imax = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0) v = -v;

  double gap = 0.0;
  bool first = true;
  for (int k = 0; k < 3; ++k) {
    if (k == kb) continue;
    const double d = std::abs(es.eigenvalues()[k] - es.eigenvalues()[kb]);
    if (first || d < gap) {
      gap = d;
      first = false;
    }
  }

  return ProtectionReport{es.eigenvalues()[kb], v[1], v[2], gap};
}

}  // namespace dsim
