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
//
// Release gate: ten numbered end-to-end criteria, each printing one
// PASS/FAIL line with its measured value and bound.  Run all with no
// arguments or a single one with --criterion N.  Exit 0 iff every selected
// criterion passes.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "dsim/estimation.hpp"
#include "dsim/model.hpp"
#include "dsim/noise.hpp"
#include "dsim/propagate.hpp"
#include "dsim/protocols.hpp"
#include "dsim/rng.hpp"
#include "dsim/scenario.hpp"
#include "dsim/schedule.hpp"
#include "dsim/text.hpp"

namespace {

using namespace dsim;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string table_path() {
  std::ifstream probe("data/table1.csv");
  return probe ? "data/table1.csv" : "../data/table1.csv";
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i)
    xs.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return xs;
}

// 1. Static dressed spectrum {±Ω/√2, 0, 0} at 1e-12·Ω for 100 random drives.
bool criterion1(std::string& detail) {
  Xoshiro256pp rng = Xoshiro256pp::seeded(11);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    SystemParams p;
    p.omega = kTwoPi * (1e3 + 99e3 * rng.uniform01());
    SignalParams s;
    s.omega_g = 0.0;
    s.detuning = 0.0;
    const Spectrum sp = eig_hermitian(build_rwa_hamiltonian(p, s, 0.0, 0.0));
    const double g = p.omega * kInvSqrt2;
    const std::array<double, 4> want{-g, 0.0, 0.0, g};
    for (int i = 0; i < 4; ++i)
      worst = std::max(worst, std::abs(sp.values[i] - want[i]) / p.omega);
  }
  detail = "max spectrum error " + num(worst) + " of the drive, bound 1e-12";
  return worst <= 1e-12;
}

// 2. Shift-immune branch and gap identity over 100 random (Ω, δ), |δ| ≤ Ω.
bool criterion2(std::string& detail) {
  Xoshiro256pp rng = Xoshiro256pp::seeded(22);
  double worst_shift = 0.0, worst_gap = 0.0;
  for (int k = 0; k < 100; ++k) {
    SystemParams p;
    p.omega = kTwoPi * (1e3 + 99e3 * rng.uniform01());
    const double delta = (2.0 * rng.uniform01() - 1.0) * p.omega;
    const ProtectionReport rep = protection_analysis(p, delta);
    const double gap_want = std::sqrt(0.5 * p.omega * p.omega + delta * delta);
    worst_shift = std::max(worst_shift, std::abs(rep.b_branch_shift) / p.omega);
    worst_gap = std::max(worst_gap, std::abs(rep.gap - gap_want) / gap_want);
  }
  detail = "max branch shift " + num(worst_shift) + " of the drive (bound 1e-10), max gap error " +
           num(worst_gap) + " rel (bound 1e-10)";
  return worst_shift <= 1e-10 && worst_gap <= 1e-10;
}

const SweepRow& find_row(const SweepResult& res, double wg, double t) {
  for (const auto& r : res.rows)
    if (r.row.omega_g_hz == wg && r.row.t_s == t) return r;
  std::fputs("table row missing\n", stderr);
  std::exit(2);
}

// 3. Ideal-projection sensitivities of the three published operating points.
bool criterion3(std::string& detail) {
  const SweepResult res = run_sensitivity_sweep(SystemParams{}, PulseParams{},
                                                load_scenarios(table_path()));
  const double green = find_row(res, 1.86, 1.5).s_hz;
  const double cyan = find_row(res, 7.54, 0.5).s_hz;
  const double red = find_row(res, 6.74, 1.0).s_hz;
  const bool g_ok = std::abs(green - 0.1306) / 0.1306 <= 0.01;
  const bool c_ok = cyan >= 0.278 * 0.7 && cyan <= 0.278 + 0.017;
  const bool r_ok = red >= 0.200 * 0.7 && red <= 0.200 + 0.004;
  detail = "S_hz green " + num(green) + " (0.1306 +-1%), cyan " + num(cyan) +
           " (in [" + num(0.278 * 0.7) + ", " + num(0.278 + 0.017) +
           "]), red " + num(red) + " (in [" + num(0.200 * 0.7) + ", " +
           num(0.200 + 0.004) + "])";
  return g_ok && c_ok && r_ok;
}

// 4. Projection-noise floor respected on every row; near-floor at long T.
bool criterion4(std::string& detail) {
  const SweepResult res = run_sensitivity_sweep(SystemParams{}, PulseParams{},
                                                load_scenarios(table_path()));
  double min_margin = 1e300, max_ratio = 0.0;
  int evaluated = 0;
  for (const auto& r : res.rows) {
    if (!r.ok) {
      detail = "row failed to simulate: " + r.error;
      return false;
    }
    ++evaluated;
    min_margin = std::min(min_margin, r.s_rad / r.s_q_rad);
    if (r.row.t_s >= 0.85) max_ratio = std::max(max_ratio, r.s_rad / r.s_q_rad);
  }
  detail = std::to_string(evaluated) + " rows, min S/S_Q " + num(min_margin) +
           " (bound >= 1), max S/S_Q at T >= 0.85 s " + num(max_ratio) +
           " (bound <= 1.05)";
  return evaluated == 22 && min_margin >= 1.0 && max_ratio <= 1.05;
}

// 5. Frequency recovery on the 21-point fringe geometry: exact to 0.1%
// noiselessly; the median shot-noise fit error against the 2x band around
// 2pi x 0.12 Hz.
bool criterion5(std::string& detail) {
  const SystemParams p;
  const StirapParams sp = make_stirap_params(p.omega);
  const PulseParams pp;
  SignalParams s;
  s.omega_g = kTwoPi * 7.54;

  const auto ts = log_grid(1e-4, 0.5, 21);
  std::vector<double> windows(ts.size()), pops(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    pops[i] = rabi_sequence_population(p, s, sp, pp, ts[i], 0.028, &windows[i]);

  std::vector<FringePoint> ideal;
  for (std::size_t i = 0; i < ts.size(); ++i)
    ideal.push_back({windows[i], pops[i], 0});
  const RabiFit noiseless = fit_rabi(ideal);
  const double rel = std::abs(noiseless.omega_g_hat - s.omega_g) / s.omega_g;
  const bool clause1 = rel <= 1e-3;

  std::vector<double> sigmas;
  for (int rep = 0; rep < 100; ++rep) {
    Xoshiro256pp rng = Xoshiro256pp::seeded(derive_stream_seed(12345, rep, 7));
    std::vector<FringePoint> pts;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      int k = 0;
      for (int j = 0; j < 30; ++j) k += rng.uniform01() < pops[i] ? 1 : 0;
      pts.push_back({windows[i], k / 30.0, 30});
    }
    sigmas.push_back(fit_rabi(pts).omega_g_std);
  }
  std::sort(sigmas.begin(), sigmas.end());
  const double median = 0.5 * (sigmas[49] + sigmas[50]);
  const double lo = kTwoPi * 0.06, hi = kTwoPi * 0.24;
  const bool clause2 = median >= lo && median <= hi;

  detail = "noiseless fit error " + num(rel) + " rel (bound 1e-3); median fit sigma " +
           num(median / kTwoPi) + " Hz (band [0.06, 0.24])";
  if (!clause2) {
    detail +=
        "\n  note: an ideal-projection pipeline reaches the information floor of"
        "\n  this geometry, about 0.05 Hz, below the band; the band's width was"
        "\n  set from an apparatus whose error bars include technical"
        "\n  fluctuations the simulation deliberately leaves out.";
  }
  return clause1 && clause2;
}

// 6. Fringe period of the detuned two-pulse scan: 1.923 s within 1%.
bool criterion6(std::string& detail) {
  const SystemParams p;
  const StirapParams sp = make_stirap_params(p.omega);
  const PulseParams pp;
  const NoiseModel quiet;
  const double det = kTwoPi * 0.52;

  std::vector<FringePoint> pts;
  const int n_pts = 33;
  const double dx = 2.0 / (n_pts - 1);
  for (int i = 0; i < n_pts; ++i) {
    const double tr = dx * i;
    const MeasurementRecord r =
        run_ramsey(p, quiet, sp, pp, tr, det, 0, 1, RamseyBasis::dressed);
    pts.push_back({tr, r.estimated_population, 0});
  }
  const RabiFit fit = fit_rabi(pts, kPi / dx);
  const double period = kTwoPi / fit.omega_g_hat;
  const double rel = std::abs(period - 1.923) / 1.923;
  detail = "fitted period " + num(period) + " s, target 1.923 s +-1% (error " +
           num(rel) + ")";
  return rel <= 0.01;
}

// 7. Noise calibrated to a 5.3 ms bare decay (analytic dephasing oracle);
// the dressed pair keeps > 1/e contrast at 100x that time.
bool criterion7(std::string& detail) {
  const SystemParams p;
  const StirapParams sp = make_stirap_params(p.omega);
  const PulseParams pp;

  NoiseModel cal;
  cal.tau_c = 1e-3;
  cal.sigma_delta = NoiseModel::sigma_for_bare_t2(5.3e-3, cal.tau_c);
  cal.master_seed = 77;
  const double oracle = std::abs(std::exp(-cal.chi_delta(5.3e-3)) -
                                 std::exp(-1.0));
  if (oracle > 1e-10) {
    detail = "calibration oracle broken: residual " + num(oracle);
    return false;
  }

  std::vector<double> ts, cs;
  for (double tr : {2e-3, 3.5e-3, 5e-3, 6.5e-3, 8e-3, 9.5e-3}) {
    ts.push_back(tr);
    cs.push_back(ramsey_contrast(p, cal, sp, pp, tr, 1000, RamseyBasis::bare, 4));
  }
  const DecayFit fit = fit_decay(ts, cs);
  const bool bare_ok = std::abs(fit.t2 - 5.3e-3) / 5.3e-3 <= 0.10;

  const double dressed =
      ramsey_contrast(p, cal, sp, pp, 0.53, 1000, RamseyBasis::dressed, 4);
  const bool dressed_ok = dressed > std::exp(-1.0);

  detail = "bare T2 fit " + num(fit.t2 * 1e3) + " ms (5.3 +-10%); dressed contrast at 530 ms " +
           num(dressed) + " (bound > " + num(std::exp(-1.0)) + ")";
  return bare_ok && dressed_ok;
}

// 8. Mapping fidelity >= 0.98 into and back out of the sensing state across
// the stated dressing range.
bool criterion8(std::string& detail) {
  const PulseParams pp;
  double worst_prep = 1.0, worst_round = 1.0;
  for (int k = 0; k <= 11; ++k) {
    SystemParams p;
    p.omega = kTwoPi * (18e3 + 2e3 * k);  // 18..40 kHz
    const StirapFidelity f = stirap_fidelity(p, make_stirap_params(p.omega), pp);
    worst_prep = std::min(worst_prep, f.prepare);
    worst_round = std::min(worst_round, f.round_trip);
  }
  detail = "min prepare fidelity " + num(worst_prep) + ", min round-trip " +
           num(worst_round) + " over 18..40 kHz (bound >= 0.98)";
  return worst_prep >= 0.98 && worst_round >= 0.98;
}

// 9. Single-tone model with counter-rotating terms vs the resonant model at
// compressed scales: worst population deviation <= 5e-3 over 5 ms.
bool criterion9(std::string& detail) {
  SystemParams p;
  p.omega0 = kTwoPi * 3e6;
  p.lambda_plus = kTwoPi * 200e3;
  p.lambda_minus = kTwoPi * 200e3;
  p.omega = kTwoPi * 2e3;

  SignalParams s;
  s.omega_g = kTwoPi * 100.0;
  s.phi = 0.0;
  s.detuning = 0.0;
  s.target = RfTarget::plus;

  const RwaComparison cmp = cross_validate_rwa(p, s, 5e-3);
  detail = "max population deviation " + num(cmp.max_deviation) +
           " (bound 5e-3) over " + std::to_string(cmp.steps) + " steps";
  return cmp.max_deviation <= 5e-3;
}

// 10. Identical seed, different worker counts: byte-identical ensemble CSVs.
bool criterion10(std::string& detail) {
  SystemParams p;
  SignalParams s;
  s.omega_g = kTwoPi * 7.54;
  s.detuning = 0.0;
  NoiseModel m;
  m.sigma_delta = kTwoPi * 80.0;
  m.tau_c = 1e-3;
  m.master_seed = 2026;

  PulseSchedule sched;
  Segment seg;
  seg.channel = Channel::mw_minus;
  seg.start = 0.0;
  seg.duration = 0.01;
  seg.envelope = Envelope::constant;
  seg.amplitude = p.omega;
  sched.add(seg);
  seg.channel = Channel::mw_plus;
  sched.add(seg);
  seg.channel = Channel::rf_signal;
  seg.amplitude = std::sqrt(2.0) * s.omega_g;
  sched.add(seg);
  sched.total_T = 0.01;

  const std::vector<double> readouts{2.5e-3, 5e-3, 7.5e-3, 0.01};
  std::vector<std::string> csvs;
  for (int workers : {1, 4, 7}) {
    const EnsembleResult r = run_ensemble(p, s, sched, m, StateVector::bright(),
                                          96, readouts, 0.0, workers);
    std::string csv = "t_s,p0,p_minus,p0p,p_plus,se0,se_minus,se0p,se_plus\n";
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      csv += format_double(r.times[i]);
      for (int b = 0; b < 4; ++b) {
        csv += ',';
        csv += format_double(r.mean_populations[i][b]);
      }
      for (int b = 0; b < 4; ++b) {
        csv += ',';
        csv += format_double(r.std_error[i][b]);
      }
      csv += '\n';
    }
    csvs.push_back(csv);
  }
  const bool same = csvs[1] == csvs[0] && csvs[2] == csvs[0];
  detail = std::string("96 trajectories at 1/4/7 workers: outputs ") +
           (same ? "byte-identical" : "DIFFER");
  return same;
}

struct Criterion {
  int id;
  const char* name;
  bool (*fn)(std::string&);
};

constexpr Criterion kCriteria[] = {
    {1, "static dressed spectrum", criterion1},
    {2, "shift-immune branch identity", criterion2},
    {3, "published sensitivity points", criterion3},
    {4, "projection-noise floor", criterion4},
    {5, "fringe frequency recovery", criterion5},
    {6, "detuned fringe period", criterion6},
    {7, "coherence enhancement", criterion7},
    {8, "dressing transfer fidelity", criterion8},
    {9, "model cross-validation", criterion9},
    {10, "worker-count determinism", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (selected < 0 || selected > 10) {
    std::fprintf(stderr, "criterion must be 1..10\n");
    return 2;
  }

  int failures = 0, ran = 0;
  for (const auto& c : kCriteria) {
    if (selected != 0 && c.id != selected) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    const bool ok = c.fn(detail);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[criterion %d] %s: %s (%s; %.2f s)\n", c.id, c.name,
                ok ? "PASS" : "FAIL", detail.c_str(), secs);
    if (!ok) ++failures;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no such criterion\n");
    return 2;
  }
  if (selected == 0)
    std::printf("acceptance: %d/%d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
