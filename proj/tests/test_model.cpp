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

#include <cmath>

#include "doctest.h"
#include "dsim/model.hpp"
#include "dsim/rng.hpp"

namespace dsim {
namespace {

SystemParams default_system() { return SystemParams{}; }

TEST_CASE("dressed transform") {
  const DressedTransform dt = dressed_transform();
  SUBCASE("unitary") {
    CHECK((dt.u * dt.u.adjoint() - Matrix4::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
  }
  SUBCASE("rows are the advertised superpositions") {
    // row order (B, 0', u, d); columns (|0>, |-1>, |0'>, |+1>)
    const Vector4 plus = StateVector::basis(kIdxPlus).a;
    const Vector4 row_b = dt.u.row(0).transpose();
    CHECK(std::abs(row_b.dot(plus) - kInvSqrt2) < 1e-12);  // <B|+1> = 1/sqrt2
    const Vector4 v = dt.u * plus;
    CHECK(std::abs(v[0]) == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(std::abs(v[1]) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(v[2]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(v[3]) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("maps the dedicated state helpers to unit rows") {
    CHECK(std::abs((dt.u * StateVector::bright().a)[0]) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs((dt.u * StateVector::up().a)[2]) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs((dt.u * StateVector::down().a)[3]) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("bare hamiltonian builder") {
  SystemParams p = default_system();
  SignalParams s;
  s.omega_g = 0.0;

  SUBCASE("drive-free diagonal") {
    SystemParams quiet = p;
    quiet.omega = 0.0;
    SignalParams off = s;
    off.omega_g = 0.0;
    const Operator h = build_bare_hamiltonian(quiet, off, 0.33, 0.0);
    CHECK(h.m(kIdx0, kIdx0).real() == quiet.omega0);
    CHECK(h.m(kIdxMinus, kIdxMinus).real() == -quiet.lambda_minus);
    CHECK(h.m(kIdxPlus, kIdxPlus).real() == quiet.lambda_plus);
    CHECK(h.m(kIdx0p, kIdx0p).real() == 0.0);
    CHECK(h.m.cwiseAbs().sum() ==
          doctest::Approx(quiet.omega0 + quiet.lambda_minus + quiet.lambda_plus)
              .epsilon(1e-14));  // nothing off the diagonal
  }
  SUBCASE("microwave entries have magnitude omega at t=0") {
    const Operator h = build_bare_hamiltonian(p, s, 0.0, 0.0);
    // cosine drive peaks at t=0: matrix element omega * cos(0) = omega
    CHECK(std::abs(h.m(kIdxMinus, kIdx0)) == doctest::Approx(p.omega).epsilon(1e-12));
    CHECK(std::abs(h.m(kIdxPlus, kIdx0)) == doctest::Approx(p.omega).epsilon(1e-12));
  }
  SUBCASE("zeeman fluctuation shifts the pair antisymmetrically") {
    const double delta = kTwoPi * 1e3;
    const Operator h0 = build_bare_hamiltonian(p, s, 0.0, 0.0);
    const Operator h1 = build_bare_hamiltonian(p, s, 0.0, delta);
    // tolerance sized to cancellation ulps of the MHz-scale diagonal entries
    CHECK(std::abs((h1.m(kIdxPlus, kIdxPlus) - h0.m(kIdxPlus, kIdxPlus)) - delta) <
          1e-6);
    CHECK(std::abs((h1.m(kIdxMinus, kIdxMinus) - h0.m(kIdxMinus, kIdxMinus)) +
                   delta) < 1e-6);
  }
  SUBCASE("hermitian at random times") {
    SignalParams rf;
    rf.omega_g = kTwoPi * 100.0;
    Xoshiro256pp rng = Xoshiro256pp::seeded(3);
    for (int i = 0; i < 25; ++i) {
      const double t = rng.uniform01() * 1e-3;
      const Operator h = build_bare_hamiltonian(p, rf, t, kTwoPi * 50.0);
      CHECK((h.m - h.m.adjoint()).cwiseAbs().maxCoeff() < 1e-9 * p.omega0);
    }
  }
}

TEST_CASE("rwa hamiltonian spectrum") {
  SystemParams p = default_system();
  SignalParams s;
  s.omega_g = 0.0;

  SUBCASE("dressing gap omega/sqrt2 for 100 random drives") {
    Xoshiro256pp rng = Xoshiro256pp::seeded(11);
    for (int i = 0; i < 100; ++i) {
      SystemParams q = p;
      q.omega = kTwoPi * (1e3 + rng.uniform01() * 99e3);
      const Spectrum spec = eig_hermitian(build_rwa_hamiltonian(q, s, 0.0, 0.0));
      const double gap = q.omega * kInvSqrt2;
      CHECK(std::abs(spec.values[0] + gap) < 1e-12 * gap);
      CHECK(std::abs(spec.values[3] - gap) < 1e-12 * gap);
      CHECK(std::abs(spec.values[1]) < 1e-12 * gap);
      CHECK(std::abs(spec.values[2]) < 1e-12 * gap);
    }
  }
  SUBCASE("supplement drive value") {
    SystemParams q = p;
    q.omega = kTwoPi * 37.27e3;
    const Spectrum spec = eig_hermitian(build_rwa_hamiltonian(q, s, 0.0, 0.0));
    CHECK(spec.values[3] == doctest::Approx(q.omega * kInvSqrt2).epsilon(1e-12));
    CHECK(spec.values[3] / kTwoPi == doctest::Approx(26355.0).epsilon(1e-3));
  }
  SUBCASE("up state sits at +omega/sqrt2") {
    const Operator h = build_rwa_hamiltonian(p, s, 0.0, 0.0);
    const Vector4 u = StateVector::up().a;
    const Complex e = u.adjoint() * (h.m * u);
    CHECK(e.real() == doctest::Approx(p.omega * kInvSqrt2).epsilon(1e-12));
  }
  SUBCASE("signal-only block: populations oscillate at exactly omega_g") {
    // the drive convention fixes the bright/clock coupling element to
    // omega_g/2, i.e. a population fringe at omega_g
    SystemParams q = p;
    q.omega = 0.0;
    SignalParams rf;
    rf.omega_g = kTwoPi * 100.0;
    const Operator h = build_rwa_hamiltonian(q, rf, 0.0, 0.0);
    const Vector4 b = StateVector::bright().a;
    const Vector4 zp = StateVector::basis(kIdx0p).a;
    const Complex g = b.adjoint() * (h.m * zp);
    CHECK(std::abs(g) == doctest::Approx(rf.omega_g / 2.0).epsilon(1e-12));
    const Spectrum spec = eig_hermitian(h);
    CHECK(spec.values[3] - spec.values[0] ==
          doctest::Approx(rf.omega_g).epsilon(1e-9));
  }
  SUBCASE("detuning shifts only the auxiliary clock level") {
    SignalParams rf;
    rf.omega_g = kTwoPi * 100.0;
    rf.detuning = kTwoPi * 3.0;
    const Operator h0 = build_rwa_hamiltonian(p, s, 0.0, 0.0);
    const Operator h1 = build_rwa_hamiltonian(p, rf, 0.0, 0.0);
    CHECK(std::abs(h1.m(kIdx0p, kIdx0p) - h0.m(kIdx0p, kIdx0p) - rf.detuning) <
          1e-12);
  }
  SUBCASE("validity flag enforces the slow-signal regime") {
    SignalParams rf;
    rf.omega_g = kTwoPi * 7.54;
    CHECK(rf.valid_for(p));
    rf.omega_g = p.omega / 10.0;
    CHECK_FALSE(rf.valid_for(p));
  }
}

TEST_CASE("protection analysis") {
  SystemParams p = default_system();

  SUBCASE("zero fluctuation") {
    const ProtectionReport r = protection_analysis(p, 0.0);
    CHECK(r.b_branch_shift == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r.contamination_u == 0.0);
    CHECK(r.contamination_d == 0.0);
    CHECK(r.gap == doctest::Approx(p.omega * kInvSqrt2).epsilon(1e-12));
  }
  SUBCASE("shift cancels at all orders; gap follows the closed form") {
    Xoshiro256pp rng = Xoshiro256pp::seeded(21);
    for (int i = 0; i < 100; ++i) {
      SystemParams q = p;
      q.omega = kTwoPi * (1e3 + rng.uniform01() * 99e3);
      const double delta = (2.0 * rng.uniform01() - 1.0) * q.omega;
      const ProtectionReport r = protection_analysis(q, delta);
      CHECK(std::abs(r.b_branch_shift) < 1e-10 * q.omega);
      const double want = std::sqrt(q.omega * q.omega / 2.0 + delta * delta);
      CHECK(r.gap == doctest::Approx(want).epsilon(1e-10));
    }
  }
  SUBCASE("contamination amplitude at the supplement operating point") {
    const ProtectionReport r = protection_analysis(p, kTwoPi * 500.0);
    const double delta = kTwoPi * 500.0;
    const double want = delta / std::sqrt(p.omega * p.omega + 2.0 * delta * delta);
    CHECK(std::abs(r.contamination_u) == doctest::Approx(want).epsilon(1e-10));
    CHECK(std::abs(r.contamination_d) == doctest::Approx(want).epsilon(1e-10));
    CHECK(std::abs(r.contamination_u) == doctest::Approx(0.0278).epsilon(2e-3));
    // pinned regression value
    CHECK(std::abs(r.contamination_u) ==
          doctest::Approx(0.027756369082668438).epsilon(1e-12));
    // opposite signs: the two split branches pull symmetrically
    CHECK(r.contamination_u * r.contamination_d < 0.0);
  }
  SUBCASE("gap at 1 kHz fluctuation") {
    const ProtectionReport r = protection_analysis(p, kTwoPi * 1000.0);
    CHECK(r.gap / kTwoPi == doctest::Approx(12767.145334803701).epsilon(1e-12));
  }
}

TEST_CASE("parameter validation") {
  SystemParams p = default_system();
  SignalParams s;
  SUBCASE("system params reject bad drives and splittings") {
    SystemParams bad = p;
    bad.omega = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.lambda_plus = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.omega = 0.0;  // drive-free system is a legal degenerate case
    CHECK_NOTHROW(bad.validate());
  }
  SUBCASE("signal params reject negative amplitude") {
    s.omega_g = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  }
  SUBCASE("carrier overrides pass through") {
    SystemParams q = p;
    CHECK(q.carrier_minus() == doctest::Approx(q.omega0 + q.lambda_minus));
    CHECK(q.carrier_plus() == doctest::Approx(q.omega0 - q.lambda_plus));
    q.omega_m = 1.0;
    q.omega_p = 2.0;
    CHECK(q.carrier_minus() == 1.0);
    CHECK(q.carrier_plus() == 2.0);
  }
}

}  // namespace
}  // namespace dsim
