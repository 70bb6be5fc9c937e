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

#ifndef DSIM_MODEL_HPP
#define DSIM_MODEL_HPP

#include "dsim/linalg.hpp"

namespace dsim {

// All frequencies in rad/s. Config-file parsing converts from Hz exactly once.

struct SystemParams {
  double omega0 = kTwoPi * 12.6428121e9;       // |0> energy offset (hyperfine splitting)
  double lambda_plus = kTwoPi * 14.076e6;      // |+1> Zeeman splitting
  double lambda_minus = kTwoPi * 14.124e6;     // |-1> Zeeman splitting
  double omega = kTwoPi * 18e3;                // microwave Rabi frequency (each channel)
  double omega_m = 0.0;                        // |0>-|-1> carrier; 0 = resonant (omega0+lambda_minus)
  double omega_p = 0.0;                        // |0>-|+1> carrier; 0 = resonant (omega0-lambda_plus)
  double theta = 3.14159265358979323846;       // relative microwave phase
  double bias_field = 1e-3;                    // Tesla, informational

  double carrier_minus() const { return omega_m != 0.0 ? omega_m : omega0 + lambda_minus; }
  double carrier_plus() const { return omega_p != 0.0 ? omega_p : omega0 - lambda_plus; }

  void validate() const;  // throws on negative omega, non-positive lambdas
};

enum class RfTarget { plus, minus, dual };

struct SignalParams {
  double omega_g = kTwoPi * 7.54;  // observable signal Rabi frequency
  double phi = 0.0;                // rf phase
  double detuning = 0.0;           // rf detuning from the target splitting
  RfTarget target = RfTarget::plus;

  // The dressed-frame reduction assumes the signal is much slower than both
  // the dressing and the microwave frequency splitting.
  bool valid_for(const SystemParams& p) const {
    return omega_g <= p.omega / 100.0 &&
           omega_g <= (p.lambda_plus + p.lambda_minus) / 100.0;
  }
  void validate() const;  // throws on negative omega_g
};

// Unitary mapping bare amplitudes (|0>,|-1>,|0'>,|+1>) to dressed amplitudes
// in the order (|B>,|0'>,|u>,|d>), with
//   |B> = (|+1>+|-1>)/sqrt2, |D> = (|+1>-|-1>)/sqrt2,
//   |u> = (|D>+|0>)/sqrt2,   |d> = (|D>-|0>)/sqrt2.
struct DressedTransform {
  Matrix4 u;
};

DressedTransform dressed_transform();

// Lab-frame Hamiltonian at time t: static splittings plus cosine drives on
// |0>-|-1|, |0>-|+1> (microwave, carriers resonant with the respective
// transitions, relative phase theta) and on the rf target transition
// (carrier at the target splitting plus detuning, phase phi). delta is the
// instantaneous Zeeman fluctuation.
Operator build_bare_hamiltonian(const SystemParams& p, const SignalParams& s,
                                double t, double delta);

// Rotating-frame Hamiltonian with theta = pi, phi = 0 folded in:
//   (Omega/sqrt2)(|D><0| + h.c.) + (omega_g/2)(|B><0'| + h.c.)
//   + delta (|B><D| + h.c.) + (eps + detuning)|0'><0'|.
// Time independent; the drive convention makes populations of the
// {|B>,|0'>} pair oscillate at exactly omega_g.
Operator build_rwa_hamiltonian(const SystemParams& p, const SignalParams& s,
                               double delta, double eps);

// Exact diagonalization of the noise-coupled dressed block at fixed delta.
struct ProtectionReport {
  double b_branch_shift;    // eigenvalue of the branch connected to |B>
  double contamination_u;   // <u|psi_B>
  double contamination_d;   // <d|psi_B>
  double gap;               // distance to the nearest other branch
};

ProtectionReport protection_analysis(const SystemParams& p, double delta);

}  // namespace dsim

#endif  // DSIM_MODEL_HPP
