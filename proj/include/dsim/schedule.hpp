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

#ifndef DSIM_SCHEDULE_HPP
#define DSIM_SCHEDULE_HPP

#include <string>
#include <vector>

#include "dsim/linalg.hpp"

namespace dsim {

enum class Channel { mw_minus, mw_plus, rf_signal };

enum class Envelope { off, constant, gaussian };

// Sub-shape of a gaussian segment. A full pulse spans one truncated Gaussian
// of duration w (std dev w/4, centered); rise covers its first half rebased
// to start at zero, fall the mirrored second half.
enum class GaussShape { rise, fall, full };

struct Segment {
  Channel channel = Channel::rf_signal;
  double start = 0.0;     // s
  double duration = 0.0;  // s
  Envelope envelope = Envelope::off;
  GaussShape shape = GaussShape::full;
  double amplitude = 0.0;  // rad/s
  double phase = 0.0;      // rad

  double end() const { return start + duration; }
  // Dimensionless envelope at absolute time t; 0 outside [start, end].
  double value(double t) const;
};

// Piecewise drive program over the three channels. Segments must not overlap
// within a channel; total_T + total_T_add equals the last segment end.
struct PulseSchedule {
  std::vector<Segment> segments;
  double total_T = 0.0;      // signal-sensitive time
  double total_T_add = 0.0;  // preparation/readout/cooling overhead
  // Step hint for time-resolved envelopes; propagation subdivides gaussian
  // segments at this pitch. Builders set it to the ramp time increment.
  double env_dt = 0.0;

  void add(const Segment& seg);  // throws on channel overlap
  double duration() const;       // last segment end
  // Complex drive amplitude * e^{i phase} summed over active segments.
  Complex drive(Channel c, double t) const;
  // Sorted, deduplicated segment start/end times.
  std::vector<double> boundaries() const;
  void validate() const;  // totals vs last end, overlap re-check
};

// Ramp geometry derived from the dressing Rabi frequency.
struct StirapParams {
  double f_omega;        // Hz, = omega/2pi
  double separation;     // s, = 5/f_omega
  double width;          // s, = 8.35/f_omega
  double time_increment; // s, = 0.1/f_omega

  void validate() const;  // ratio invariants to 1e-12 relative
};

StirapParams make_stirap_params(double omega);  // omega in rad/s

// Rabi frequencies for the square mapping pulses.
struct PulseParams {
  double mw_pi_rabi = kTwoPi * 10e3;   // microwave pi / pi/2 pulses
  double rf_pulse_rabi = kTwoPi * 200; // rf pi/2 pulses (dressed-qubit rotations)
};

enum class StirapDirection { prepare, reverse };

// Dressing ramp program. prepare: pi pulse |0>->|+1>, then a counter-ordered
// pair of Gaussian rises (mw_minus first, mw_plus delayed by the separation)
// ending with both channels held at constant amplitude for `hold`. reverse:
// hold first, then mw_minus falls, mw_plus falls one separation later, and a
// final pi pulse maps |-1> -> |0>. The channel sign convention gives the two
// dressing drives the relative phase that parks the equal-amplitude dark
// state on (|+1>+|-1>)/sqrt2.
// hold must sit on the time_increment grid.
PulseSchedule build_stirap_schedule(const StirapParams& sp, StirapDirection dir,
                                    double hold, const PulseParams& pp);

// Boundaries of the assembled sensing sequences.
struct SequenceTiming {
  double prep_end;       // both dressing ramps at full amplitude
  double window_start;   // rf window start (snapped to the ramp grid)
  double window;         // rf window duration actually scheduled
  double reverse_start;  // first dressing ramp-down
  double end;            // last segment end
};

// Full single-datum program: prepare, rf window of duration ~T, reverse,
// mapping pulse, then idle padding so that overhead equals t_add. The rf
// window start and duration snap to the time_increment grid; the snapped
// duration is reported in timing.window. Throws if t_add is smaller than
// the sequence's intrinsic overhead.
PulseSchedule build_rabi_schedule(const StirapParams& sp, const PulseParams& pp,
                                  double signal_amplitude, double signal_phase,
                                  double T, double t_add,
                                  SequenceTiming* timing = nullptr);

// Two rf pi/2 pulses separated by free evolution T_R inside the dressing
// hold; second_phase offsets the closing pulse for quadrature readout.
PulseSchedule build_ramsey_schedule(const StirapParams& sp, const PulseParams& pp,
                                    double T_R, double second_phase,
                                    SequenceTiming* timing = nullptr);

// Bare two-level comparison: two mw_minus pi/2 pulses separated by T_R,
// no dressing.
PulseSchedule build_bare_ramsey_schedule(const PulseParams& pp, double T_R,
                                         double second_phase);

// T = summed non-off rf segment time, T_add = rest of the program.
struct TimingReport {
  double T;
  double T_add;
  double T_s;  // T + T_add
};

TimingReport sequence_timing(const PulseSchedule& schedule);

// One segment per line: channel,start,duration,envelope,amplitude_Hz,phase_rad.
std::string export_schedule(const PulseSchedule& schedule);

}  // namespace dsim

#endif  // DSIM_SCHEDULE_HPP
