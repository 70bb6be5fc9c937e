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

#include "dsim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dsim/text.hpp"

namespace dsim {

namespace {

// Gaussian ramps truncate at exp(-2); rebase so they start/end at exactly 0.
const double kTrunc = std::exp(-2.0);

double rebase(double g) { return (g - kTrunc) / (1.0 - kTrunc); }

const char* channel_name(Channel c) {
  switch (c) {
    case Channel::mw_minus: return "mw_minus";
    case Channel::mw_plus: return "mw_plus";
    case Channel::rf_signal: return "rf_signal";
  }
  return "?";
}

const char* envelope_name(Envelope e) {
  switch (e) {
    case Envelope::off: return "off";
    case Envelope::constant: return "constant";
    case Envelope::gaussian: return "gaussian";
  }
  return "?";
}

double snap_to_grid(double t, double inc) { return std::round(t / inc) * inc; }

// Smallest grid multiple >= t (with a relative guard for exact multiples).
double snap_up_to_grid(double t, double inc) {
  return std::ceil(t / inc - 1e-9) * inc;
}

}  // namespace

double Segment::value(double t) const {
  const double u = t - start;
  if (u < 0.0 || u >= duration || duration <= 0.0) return 0.0;
  switch (envelope) {
    case Envelope::off:
      return 0.0;
    case Envelope::constant:
      return 1.0;
    case Envelope::gaussian:
      break;
  }
  const double d = duration;
  switch (shape) {
    case GaussShape::rise:
      // first half of a width-2d pulse, peak at the segment end
      return rebase(std::exp(-2.0 * (u - d) * (u - d) / (d * d)));
    case GaussShape::fall:
      return rebase(std::exp(-2.0 * u * u / (d * d)));
    case GaussShape::full:
      // std dev d/4, centered
      return rebase(std::exp(-8.0 * (u - 0.5 * d) * (u - 0.5 * d) / (d * d)));
  }
  return 0.0;
}

void PulseSchedule::add(const Segment& seg) {
  if (seg.duration < 0.0) throw std::invalid_argument("segment duration must be >= 0");
  if (seg.start < -1e-15) throw std::invalid_argument("segment start must be >= 0");
  const double tol = 1e-12 * std::max(1.0, seg.end());
  for (const Segment& e : segments) {
    if (e.channel != seg.channel) continue;
    if (seg.start < e.end() - tol && e.start < seg.end() - tol)
      throw std::invalid_argument(std::string("overlapping segments on ") +
                                  channel_name(seg.channel));
  }
  segments.push_back(seg);
}

double PulseSchedule::duration() const {
  double end = 0.0;
  for (const Segment& s : segments) end = std::max(end, s.end());
  return end;
}

Complex PulseSchedule::drive(Channel c, double t) const {
  Complex acc(0.0, 0.0);
  for (const Segment& s : segments) {
    if (s.channel != c) continue;
    const double v = s.value(t);
    if (v == 0.0) continue;
    acc += s.amplitude * v * Complex(std::cos(s.phase), std::sin(s.phase));
  }
  return acc;
}

std::vector<double> PulseSchedule::boundaries() const {
  std::vector<double> ts;
  ts.reserve(2 * segments.size());
  for (const Segment& s : segments) {
    ts.push_back(s.start);
    ts.push_back(s.end());
  }
  std::sort(ts.begin(), ts.end());
  const double tol = 1e-12 * std::max(1.0, duration());
  std::vector<double> out;
  for (double t : ts)
    if (out.empty() || t - out.back() > tol) out.push_back(t);
  return out;
}

void PulseSchedule::validate() const {
  for (const Segment& s : segments) {
    if (s.duration < 0.0) throw std::invalid_argument("segment duration must be >= 0");
    if (s.start < -1e-15) throw std::invalid_argument("segment start must be >= 0");
  }
  const double tol = 1e-12 * std::max(1.0, duration());
  for (size_t i = 0; i < segments.size(); ++i)
    for (size_t j = i + 1; j < segments.size(); ++j) {
      const Segment& a = segments[i];
      const Segment& b = segments[j];
      if (a.channel != b.channel) continue;
      if (a.start < b.end() - tol && b.start < a.end() - tol)
        throw std::invalid_argument(std::string("overlapping segments on ") +
                                    channel_name(a.channel));
    }
  const double end = duration();
  if (std::abs((total_T + total_T_add) - end) > 1e-9 * std::max(1.0, end))
    throw std::invalid_argument("total_T + total_T_add must equal the last segment end");
}

void StirapParams::validate() const {
  if (f_omega <= 0.0) throw std::invalid_argument("f_omega must be positive");
  if (std::abs(separation * f_omega / 5.0 - 1.0) > 1e-12 ||
      std::abs(width * f_omega / 8.35 - 1.0) > 1e-12 ||
      std::abs(time_increment * f_omega / 0.1 - 1.0) > 1e-12)
    throw std::invalid_argument("ramp geometry must scale as 5, 8.35, 0.1 over f_omega");
}

StirapParams make_stirap_params(double omega) {
  if (omega <= 0.0) throw std::invalid_argument("dressing Rabi frequency must be positive");
  const double f = omega / kTwoPi;
  return StirapParams{f, 5.0 / f, 8.35 / f, 0.1 / f};
}

namespace {

void check_hold_grid(double hold, double inc) {
  if (hold < 0.0) throw std::invalid_argument("hold must be >= 0");
  const double k = std::round(hold / inc);
  if (std::abs(hold - k * inc) > 1e-9 * std::max(inc, hold))
    throw std::invalid_argument("hold must sit on the time increment grid");
}

struct RampTimes {
  double omega;  // dressing amplitude, rad/s
  double tpi;    // mapping pi-pulse duration
  double half;   // ramp duration (half the envelope width)
  double sep;
};

RampTimes ramp_times(const StirapParams& sp, const PulseParams& pp) {
  sp.validate();
  if (pp.mw_pi_rabi <= 0.0 || pp.rf_pulse_rabi <= 0.0)
    throw std::invalid_argument("pulse Rabi frequencies must be positive");
  const double pi = kTwoPi / 2.0;
  return RampTimes{kTwoPi * sp.f_omega, pi / pp.mw_pi_rabi, 0.5 * sp.width,
                   sp.separation};
}

// pi pulse |0> -> |+1>, mw_minus ramp, delayed mw_plus ramp; holds run to
// minus_until / plus_until. Returns the time both ramps are complete.
double add_prepare(PulseSchedule& ps, const RampTimes& rt, const PulseParams& pp,
                   double minus_until, double plus_until) {
  ps.add({Channel::mw_plus, 0.0, rt.tpi, Envelope::constant, GaussShape::full,
          pp.mw_pi_rabi, 0.0});
  ps.add({Channel::mw_minus, rt.tpi, rt.half, Envelope::gaussian, GaussShape::rise,
          rt.omega, 0.0});
  ps.add({Channel::mw_plus, rt.tpi + rt.sep, rt.half, Envelope::gaussian,
          GaussShape::rise, rt.omega, 0.0});
  const double ramps_done = rt.tpi + rt.sep + rt.half;
  if (minus_until > rt.tpi + rt.half)
    ps.add({Channel::mw_minus, rt.tpi + rt.half, minus_until - (rt.tpi + rt.half),
            Envelope::constant, GaussShape::full, rt.omega, 0.0});
  if (plus_until > ramps_done)
    ps.add({Channel::mw_plus, ramps_done, plus_until - ramps_done,
            Envelope::constant, GaussShape::full, rt.omega, 0.0});
  return ramps_done;
}

// mw_minus falls at t0, mw_plus one separation later, then the mapping
// pi pulse |-1> -> |0>. Returns the sequence end.
double add_reverse(PulseSchedule& ps, const RampTimes& rt, const PulseParams& pp,
                   double t0) {
  ps.add({Channel::mw_minus, t0, rt.half, Envelope::gaussian, GaussShape::fall,
          rt.omega, 0.0});
  ps.add({Channel::mw_plus, t0 + rt.sep, rt.half, Envelope::gaussian,
          GaussShape::fall, rt.omega, 0.0});
  const double falls_done = t0 + rt.sep + rt.half;
  ps.add({Channel::mw_minus, falls_done, rt.tpi, Envelope::constant,
          GaussShape::full, pp.mw_pi_rabi, 0.0});
  return falls_done + rt.tpi;
}

}  // namespace

PulseSchedule build_stirap_schedule(const StirapParams& sp, StirapDirection dir,
                                    double hold, const PulseParams& pp) {
  const RampTimes rt = ramp_times(sp, pp);
  check_hold_grid(hold, sp.time_increment);

  PulseSchedule ps;
  ps.env_dt = sp.time_increment;
  double end = 0.0;
  if (dir == StirapDirection::prepare) {
    const double ramps_done = rt.tpi + rt.sep + rt.half;
    end = ramps_done + hold;
    add_prepare(ps, rt, pp, end, end);
  } else {
    if (hold > 0.0) {
      ps.add({Channel::mw_minus, 0.0, hold, Envelope::constant, GaussShape::full,
              rt.omega, 0.0});
      ps.add({Channel::mw_plus, 0.0, hold + rt.sep, Envelope::constant,
              GaussShape::full, rt.omega, 0.0});
    } else {
      ps.add({Channel::mw_plus, 0.0, rt.sep, Envelope::constant, GaussShape::full,
              rt.omega, 0.0});
    }
    end = add_reverse(ps, rt, pp, hold);
  }
  ps.total_T = 0.0;
  ps.total_T_add = end;
  return ps;
}

PulseSchedule build_rabi_schedule(const StirapParams& sp, const PulseParams& pp,
                                  double signal_amplitude, double signal_phase,
                                  double T, double t_add, SequenceTiming* timing) {
  if (T < 0.0) throw std::invalid_argument("rf window duration must be >= 0");
  if (t_add < 0.0) throw std::invalid_argument("overhead time must be >= 0");
  const RampTimes rt = ramp_times(sp, pp);
  const double inc = sp.time_increment;

  const double prep_end = rt.tpi + rt.sep + rt.half;
  const double ws = rt.tpi + snap_up_to_grid(rt.sep + rt.half, inc);
  const double window = snap_to_grid(T, inc);
  const double rev = ws + window;
  const double seq_end = rev + rt.sep + rt.half + rt.tpi;
  const double overhead = seq_end - window;
  const double pad = t_add - overhead;
  if (pad < -1e-12)
    throw std::invalid_argument(
        "overhead budget smaller than the sequence's intrinsic overhead (" +
        format_double(overhead) + " s)");

  PulseSchedule ps;
  ps.env_dt = inc;
  add_prepare(ps, rt, pp, rev, rev + rt.sep);
  if (window > 0.0)
    ps.add({Channel::rf_signal, ws, window, Envelope::constant, GaussShape::full,
            signal_amplitude, signal_phase});
  const double end = add_reverse(ps, rt, pp, rev);
  if (pad > 0.0)
    ps.add({Channel::rf_signal, end, pad, Envelope::off, GaussShape::full, 0.0, 0.0});

  ps.total_T = window;
  ps.total_T_add = ps.duration() - window;
  if (timing) *timing = SequenceTiming{prep_end, ws, window, rev, ps.duration()};
  return ps;
}

PulseSchedule build_ramsey_schedule(const StirapParams& sp, const PulseParams& pp,
                                    double T_R, double second_phase,
                                    SequenceTiming* timing) {
  if (T_R < 0.0) throw std::invalid_argument("free evolution time must be >= 0");
  const RampTimes rt = ramp_times(sp, pp);
  const double inc = sp.time_increment;

  const double prep_end = rt.tpi + rt.sep + rt.half;
  const double ws = rt.tpi + snap_up_to_grid(rt.sep + rt.half, inc);
  const double tq = 0.25 * kTwoPi / pp.rf_pulse_rabi;  // pi/2 area
  const double gap = snap_to_grid(T_R, inc);
  const double rev = ws + 2.0 * tq + gap;

  PulseSchedule ps;
  ps.env_dt = inc;
  add_prepare(ps, rt, pp, rev, rev + rt.sep);
  ps.add({Channel::rf_signal, ws, tq, Envelope::constant, GaussShape::full,
          pp.rf_pulse_rabi, 0.0});
  ps.add({Channel::rf_signal, ws + tq + gap, tq, Envelope::constant,
          GaussShape::full, pp.rf_pulse_rabi, second_phase});
  add_reverse(ps, rt, pp, rev);

  ps.total_T = gap;
  ps.total_T_add = ps.duration() - gap;
  if (timing) *timing = SequenceTiming{prep_end, ws, gap, rev, ps.duration()};
  return ps;
}

PulseSchedule build_bare_ramsey_schedule(const PulseParams& pp, double T_R,
                                         double second_phase) {
  if (T_R < 0.0) throw std::invalid_argument("free evolution time must be >= 0");
  if (pp.mw_pi_rabi <= 0.0)
    throw std::invalid_argument("pulse Rabi frequencies must be positive");
  const double tq = 0.25 * kTwoPi / pp.mw_pi_rabi;

  PulseSchedule ps;
  ps.add({Channel::mw_minus, 0.0, tq, Envelope::constant, GaussShape::full,
          pp.mw_pi_rabi, 0.0});
  ps.add({Channel::mw_minus, tq + T_R, tq, Envelope::constant, GaussShape::full,
          pp.mw_pi_rabi, second_phase});
  ps.total_T = T_R;
  ps.total_T_add = 2.0 * tq;
  return ps;
}

TimingReport sequence_timing(const PulseSchedule& schedule) {
  schedule.validate();
  double t = 0.0;
  for (const Segment& s : schedule.segments)
    if (s.channel == Channel::rf_signal && s.envelope != Envelope::off)
      t += s.duration;
  const double t_add = schedule.duration() - t;
  return TimingReport{t, t_add, t + t_add};
}

std::string export_schedule(const PulseSchedule& schedule) {
  std::string out = "channel,start,duration,envelope,amplitude_Hz,phase_rad\n";
  for (const Segment& s : schedule.segments) {
    out += channel_name(s.channel);
    out += ',';
    out += format_double(s.start);
    out += ',';
    out += format_double(s.duration);
    out += ',';
    out += envelope_name(s.envelope);
    out += ',';
    out += format_double(s.amplitude / kTwoPi);
    out += ',';
    out += format_double(s.phase);
    out += '\n';
  }
  return out;
}

}  // namespace dsim
