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

#include "dsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dsim/protocols.hpp"
#include "dsim/text.hpp"

namespace dsim {

namespace {

constexpr const char* kScenarioHeader = "omega_g_hz,delta_omega_g_hz,n,T_s,T_add_s";
constexpr const char* kResultsHeader =
    "phi_rad,T_s,T_add_s,n,delta_omega_rad_s,S_rad,S_hz,S_Q_rad,B_sens_pT";

[[noreturn]] void row_fail(std::size_t row, const std::string& msg) {
  throw std::invalid_argument("scenario row " + std::to_string(row) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

double field_double(const std::string& v, std::size_t row, const char* name) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
    row_fail(row, std::string("bad ") + name + " '" + v + "'");
  return x;
}

std::int64_t field_int(const std::string& v, std::size_t row, const char* name) {
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    row_fail(row, std::string("bad ") + name + " '" + v + "'");
  return x;
}

}  // namespace

std::vector<ScenarioRow> parse_scenarios(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kScenarioHeader)
    throw std::invalid_argument(std::string("scenario header must be exactly '") +
                                kScenarioHeader + "'");
  std::vector<ScenarioRow> rows;
  std::size_t idx = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++idx;
    const auto f = split_fields(line);
    if (f.size() != 5) row_fail(idx, "expected 5 fields, got " + std::to_string(f.size()));
    ScenarioRow r;
    r.omega_g_hz = field_double(f[0], idx, "omega_g_hz");
    r.delta_omega_g_hz = field_double(f[1], idx, "delta_omega_g_hz");
    r.n = field_int(f[2], idx, "n");
    r.t_s = field_double(f[3], idx, "T_s");
    r.t_add_s = field_double(f[4], idx, "T_add_s");
    if (r.omega_g_hz <= 0.0) row_fail(idx, "omega_g_hz must be positive");
    if (r.delta_omega_g_hz < 0.0) row_fail(idx, "delta_omega_g_hz must be >= 0");
    if (r.n < 1) row_fail(idx, "n must be >= 1");
    if (r.t_s <= 0.0) row_fail(idx, "T_s must be positive");
    if (r.t_add_s < 0.0) row_fail(idx, "T_add_s must be >= 0");
    rows.push_back(r);
  }
  // a header with no body is a valid (empty) table; row-count requirements
  // belong to the consumers
  return rows;
}

std::vector<ScenarioRow> load_scenarios(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenarios(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string write_scenarios(const std::vector<ScenarioRow>& rows) {
  std::string out = kScenarioHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += format_double(r.omega_g_hz);
    out += ',';
    out += format_double(r.delta_omega_g_hz);
    out += ',';
    out += format_int(r.n);
    out += ',';
    out += format_double(r.t_s);
    out += ',';
    out += format_double(r.t_add_s);
    out += '\n';
  }
  return out;
}

SweepResult run_sensitivity_sweep(const SystemParams& p, const PulseParams& pp,
                                  const std::vector<ScenarioRow>& rows,
                                  double kappa) {
  p.validate();
  const StirapParams sp = make_stirap_params(p.omega);

  SweepResult result;
  result.rows.reserve(rows.size());
  for (const auto& row : rows) {
    SweepRow out;
    out.row = row;
    try {
      SignalParams s;
      s.omega_g = kTwoPi * row.omega_g_hz;
      s.phi = 0.0;
      s.detuning = 0.0;
      s.target = RfTarget::dual;
      double window = 0.0;
      out.p_ideal = rabi_sequence_population(p, s, sp, pp, row.t_s, row.t_add_s,
                                             &window);
      out.t_window = window;
      out.phi = s.omega_g * window;
      out.ok = true;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    result.rows.push_back(out);
  }

  std::vector<FringePoint> points;
  for (const auto& r : result.rows)
    if (r.ok) points.push_back({r.phi, r.p_ideal, r.row.n});
  if (points.size() < 5)
    throw std::runtime_error("sensitivity sweep: fewer than five rows simulated");
  result.fit = fit_rabi(points);

  const double f = result.fit.contrast_f;
  const double w = result.fit.omega_g_hat;  // dimensionless, close to 1
  for (auto& r : result.rows) {
    if (!r.ok) continue;
    r.p_model = 0.5 * (1.0 + f * std::cos(w * r.phi));
    r.delta_p = std::sqrt(std::max(0.0, r.p_model * (1.0 - r.p_model)) /
                          static_cast<double>(r.row.n));
    const double slope = 0.5 * f * w * std::sin(w * r.phi);
    r.delta_omega_g = delta_omega(r.delta_p, slope, r.t_window);
    const double total = static_cast<double>(r.row.n) * (r.t_window + r.row.t_add_s);
    const Sensitivity s = sensitivity(r.delta_omega_g, total);
    r.s_rad = s.s_rad;
    r.s_hz = s.s_hz;
    r.s_q_rad = sql(r.t_window);
    r.b_sens_pt = omega_to_field(r.s_rad, kappa) * 1e12;
  }

  std::sort(result.rows.begin(), result.rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.phi < b.phi; });
  return result;
}

std::string results_csv(const SweepResult& result) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const auto& r : result.rows) {
    if (!r.ok) continue;
    out += format_double(r.phi);
    out += ',';
    out += format_double(r.t_window);
    out += ',';
    out += format_double(r.row.t_add_s);
    out += ',';
    out += format_int(r.row.n);
    out += ',';
    out += format_double(r.delta_omega_g);
    out += ',';
    out += format_double(r.s_rad);
    out += ',';
    out += format_double(r.s_hz);
    out += ',';
    out += format_double(r.s_q_rad);
    out += ',';
    out += format_double(r.b_sens_pt);
    out += '\n';
  }
  return out;
}

std::string fringe_plot(const SweepResult& result) {
  std::string out = "x,y,sigma\n";
  for (const auto& r : result.rows) {
    if (!r.ok) continue;
    out += format_double(r.phi);
    out += ',';
    out += format_double(r.p_ideal);
    out += ',';
    out += format_double(r.delta_p);
    out += '\n';
  }
  return out;
}

}  // namespace dsim
