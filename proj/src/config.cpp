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

#include "dsim/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dsim/linalg.hpp"

namespace dsim {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  if (line > 0)
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
  throw std::invalid_argument("config: " + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& v, int line, const std::string& key) {
  if (v.empty()) fail(line, "empty value for '" + key + "'");
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || !std::isfinite(x))
    fail(line, "'" + v + "' is not a finite number for '" + key + "'");
  return x;
}

std::int64_t to_int(const std::string& v, int line, const std::string& key) {
  if (v.empty()) fail(line, "empty value for '" + key + "'");
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE)
    fail(line, "'" + v + "' is not an integer for '" + key + "'");
  return x;
}

std::uint64_t to_uint(const std::string& v, int line, const std::string& key) {
  if (v.empty() || v[0] == '-') fail(line, "'" + v + "' is not unsigned for '" + key + "'");
  char* end = nullptr;
  errno = 0;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE)
    fail(line, "'" + v + "' is not an unsigned integer for '" + key + "'");
  return x;
}

// Assigns one key; throws on unknown keys so typos cannot silently fall back
// to defaults.
void assign(Config& c, const std::string& key, const std::string& value, int line) {
  const auto num = [&] { return to_double(value, line, key); };
  const auto integer = [&] { return to_int(value, line, key); };

  if (key == "omega0_hz") c.omega0_hz = num();
  else if (key == "lambda_plus_hz") c.lambda_plus_hz = num();
  else if (key == "lambda_minus_hz") c.lambda_minus_hz = num();
  else if (key == "omega_hz") c.omega_hz = num();
  else if (key == "theta_rad") c.theta_rad = num();
  else if (key == "bias_field_t") c.bias_field_t = num();
  else if (key == "omega_g_hz") c.omega_g_hz = num();
  else if (key == "phi_rad") c.phi_rad = num();
  else if (key == "detuning_hz") c.detuning_hz = num();
  else if (key == "target") c.target = value;
  else if (key == "sigma_delta_hz") c.sigma_delta_hz = num();
  else if (key == "tau_c_ms") c.tau_c_ms = num();
  else if (key == "sigma_eps_hz") c.sigma_eps_hz = num();
  else if (key == "bare_t2_ms") c.bare_t2_ms = num();
  else if (key == "mw_pi_rabi_hz") c.mw_pi_rabi_hz = num();
  else if (key == "rf_pulse_rabi_hz") c.rf_pulse_rabi_hz = num();
  else if (key == "seed") c.seed = to_uint(value, line, key);
  else if (key == "trajectories") c.trajectories = integer();
  else if (key == "workers") c.workers = static_cast<int>(integer());
  else if (key == "output") c.output = value;
  else if (key == "rabi_t_min_ms") c.rabi_t_min_ms = num();
  else if (key == "rabi_t_max_ms") c.rabi_t_max_ms = num();
  else if (key == "rabi_points") c.rabi_points = static_cast<int>(integer());
  else if (key == "rabi_n") c.rabi_n = integer();
  else if (key == "rabi_spacing") c.rabi_spacing = value;
  else if (key == "rabi_t_add_s") c.rabi_t_add_s = num();
  else if (key == "ramsey_detuning_hz") c.ramsey_detuning_hz = num();
  else if (key == "ramsey_t_max_s") c.ramsey_t_max_s = num();
  else if (key == "ramsey_points") c.ramsey_points = static_cast<int>(integer());
  else if (key == "ramsey_n") c.ramsey_n = integer();
  else if (key == "ramsey_basis") c.ramsey_basis = value;
  else if (key == "validate_omega0_hz") c.validate_omega0_hz = num();
  else if (key == "validate_lambda_hz") c.validate_lambda_hz = num();
  else if (key == "validate_omega_hz") c.validate_omega_hz = num();
  else if (key == "validate_omega_g_hz") c.validate_omega_g_hz = num();
  else if (key == "validate_duration_ms") c.validate_duration_ms = num();
  else if (key == "validate_dt_ns") c.validate_dt_ns = num();
  else if (key == "validate_step_budget") c.validate_step_budget = integer();
  else if (key == "kappa_t_per_rad_s") c.kappa_t_per_rad_s = num();
  else fail(line, "unknown key '" + key + "'");
}

void check(bool ok, const std::string& msg) {
  if (!ok) fail(0, msg);
}

void validate_semantics(const Config& c) {
  check(c.omega0_hz > 0.0, "omega0_hz must be positive");
  check(c.lambda_plus_hz > 0.0 && c.lambda_minus_hz > 0.0,
        "Zeeman splittings must be positive");
  check(c.omega_hz >= 0.0, "omega_hz must be >= 0");
  check(std::isfinite(c.theta_rad) && std::isfinite(c.phi_rad),
        "phases must be finite");
  check(c.omega_g_hz >= 0.0, "omega_g_hz must be >= 0");
  check(c.target == "plus" || c.target == "minus" || c.target == "dual",
        "target must be plus, minus, or dual");
  check(c.sigma_delta_hz >= 0.0 && c.sigma_eps_hz >= 0.0,
        "noise amplitudes must be >= 0");
  check(c.tau_c_ms > 0.0, "tau_c_ms must be positive");
  check(c.bare_t2_ms >= 0.0, "bare_t2_ms must be >= 0");
  check(!(c.bare_t2_ms > 0.0 && c.sigma_delta_hz > 0.0),
        "set either bare_t2_ms or sigma_delta_hz, not both");
  check(c.mw_pi_rabi_hz > 0.0 && c.rf_pulse_rabi_hz > 0.0,
        "pulse Rabi frequencies must be positive");
  check(c.trajectories >= 1, "trajectories must be >= 1");
  check(c.workers >= 1, "workers must be >= 1");
  check(!c.output.empty(), "output path must not be empty");
  check(c.rabi_t_min_ms > 0.0, "rabi_t_min_ms must be positive");
  check(c.rabi_t_max_ms >= c.rabi_t_min_ms,
        "rabi_t_max_ms must be >= rabi_t_min_ms");
  check(c.rabi_points >= 2, "rabi_points must be >= 2");
  check(c.rabi_n >= 1, "rabi_n must be >= 1");
  check(c.rabi_spacing == "log" || c.rabi_spacing == "linear",
        "rabi_spacing must be log or linear");
  check(c.rabi_t_add_s >= 0.0, "rabi_t_add_s must be >= 0");
  check(std::isfinite(c.ramsey_detuning_hz), "ramsey_detuning_hz must be finite");
  check(c.ramsey_t_max_s > 0.0, "ramsey_t_max_s must be positive");
  check(c.ramsey_points >= 1, "ramsey_points must be >= 1");
  check(c.ramsey_n >= 1, "ramsey_n must be >= 1");
  check(c.ramsey_basis == "dressed" || c.ramsey_basis == "bare",
        "ramsey_basis must be dressed or bare");
  check(c.validate_omega0_hz > 0.0 && c.validate_lambda_hz > 0.0 &&
            c.validate_omega_hz > 0.0 && c.validate_omega_g_hz >= 0.0,
        "validate_* frequencies must be positive");
  check(c.validate_duration_ms > 0.0, "validate_duration_ms must be positive");
  check(c.validate_dt_ns >= 0.0, "validate_dt_ns must be >= 0");
  check(c.validate_step_budget >= 1, "validate_step_budget must be >= 1");
  check(c.kappa_t_per_rad_s > 0.0, "kappa_t_per_rad_s must be positive");
}

// Cuts a comment started by '#' or ';' at position 0 or after whitespace.
std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if ((line[i] == '#' || line[i] == ';') &&
        (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1]))))
      return line.substr(0, i);
  }
  return line;
}

}  // namespace

Config parse_config(const std::string& text) {
  Config cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(line_no, "expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "missing key before '='");
    if (!seen.insert(key).second) fail(line_no, "duplicate key '" + key + "'");
    assign(cfg, key, value, line_no);
  }
  validate_semantics(cfg);
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void apply_override(Config& cfg, const std::string& key, const std::string& value) {
  assign(cfg, trim(key), trim(value), 0);
  validate_semantics(cfg);
}

SystemParams Config::system_params() const {
  SystemParams p;
  p.omega0 = kTwoPi * omega0_hz;
  p.lambda_plus = kTwoPi * lambda_plus_hz;
  p.lambda_minus = kTwoPi * lambda_minus_hz;
  p.omega = kTwoPi * omega_hz;
  p.theta = theta_rad;
  p.bias_field = bias_field_t;
  p.validate();
  return p;
}

SignalParams Config::signal_params() const {
  SignalParams s;
  s.omega_g = kTwoPi * omega_g_hz;
  s.phi = phi_rad;
  s.detuning = kTwoPi * detuning_hz;
  if (target == "plus") s.target = RfTarget::plus;
  else if (target == "minus") s.target = RfTarget::minus;
  else s.target = RfTarget::dual;
  s.validate();
  return s;
}

NoiseModel Config::noise_model() const {
  NoiseModel m;
  m.tau_c = tau_c_ms * 1e-3;
  m.sigma_eps = kTwoPi * sigma_eps_hz;
  m.master_seed = seed;
  m.sigma_delta = bare_t2_ms > 0.0
                      ? NoiseModel::sigma_for_bare_t2(bare_t2_ms * 1e-3, m.tau_c)
                      : kTwoPi * sigma_delta_hz;
  return m;
}

PulseParams Config::pulse_params() const {
  PulseParams pp;
  pp.mw_pi_rabi = kTwoPi * mw_pi_rabi_hz;
  pp.rf_pulse_rabi = kTwoPi * rf_pulse_rabi_hz;
  return pp;
}

}  // namespace dsim
