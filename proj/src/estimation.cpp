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

#include "dsim/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dsim/linalg.hpp"

namespace dsim {

namespace {

struct WeightedData {
  std::vector<double> x;
  std::vector<double> y;   // p_hat - 1/2
  std::vector<double> w;   // inverse-variance weights
};

WeightedData prepare(const std::vector<FringePoint>& points) {
  if (points.size() < 5)
    throw std::invalid_argument("fit_rabi needs at least five points");
  WeightedData d;
  d.x.reserve(points.size());
  d.y.reserve(points.size());
  d.w.reserve(points.size());
  for (const auto& pt : points) {
    if (!std::isfinite(pt.x) || !std::isfinite(pt.p_hat) || pt.x < 0.0)
      throw std::invalid_argument("fit_rabi: non-finite or negative sample");
    const double n = pt.n > 0 ? static_cast<double>(pt.n) : 1.0;
    // Binomial variance with a half-shot floor so p_hat at 0 or 1 stays usable.
    const double var = pt.p_hat * (1.0 - pt.p_hat) + 0.5 / n;
    d.x.push_back(pt.x);
    d.y.push_back(pt.p_hat - 0.5);
    d.w.push_back(n / var);
  }
  const auto [ymin, ymax] = std::minmax_element(d.y.begin(), d.y.end());
  if (*ymax - *ymin < 1e-12)
    throw std::invalid_argument("fit_rabi: all populations equal, no fringe to fit");
  return d;
}

// Best half-amplitude for fixed omega: y ~ a cos(w x), closed form.
double amplitude_at(const WeightedData& d, double omega, double* residual) {
  double swc2 = 0.0, swcy = 0.0, swy2 = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const double c = std::cos(omega * d.x[i]);
    swc2 += d.w[i] * c * c;
    swcy += d.w[i] * c * d.y[i];
    swy2 += d.w[i] * d.y[i] * d.y[i];
  }
  double a = swc2 > 0.0 ? swcy / swc2 : 0.0;
  a = std::clamp(a, 0.0, 0.525);
  if (residual) *residual = swy2 - 2.0 * a * swcy + a * a * swc2;
  return a;
}

struct ScanResult {
  double omega = 0.0;
  double amplitude = 0.0;
};

ScanResult coarse_scan(const WeightedData& d, double omega_max) {
  std::vector<double> xs = d.x;
  std::sort(xs.begin(), xs.end());
  const double x_max = xs.back();
  double dx_min = x_max;
  for (std::size_t i = 1; i < xs.size(); ++i)
    dx_min = std::min(dx_min, xs[i] - xs[i - 1]);
  if (x_max <= 0.0)
    throw std::invalid_argument("fit_rabi: abscissa span is zero");
  dx_min = std::max(dx_min, x_max * 1e-6);  // duplicate-x guard

  const double w_lo = kPi / (2.0 * x_max);   // half a period across the span
  // Default ceiling at the Nyquist limit of the tightest gap: anything above
  // it is an exact alias on a uniform grid.  An explicit omega_max overrides
  // in both directions (non-uniform grids can resolve past it).
  double w_hi = omega_max > 0.0 ? omega_max : kPi / dx_min;
  if (w_hi <= w_lo)
    throw std::invalid_argument("fit_rabi: omega_max below the resolvable band");
  // Resolve the periodogram finer than the natural linewidth 2 pi / x_max.
  const double dw = kPi / (8.0 * x_max);
  const std::size_t grid =
      std::min<std::size_t>(2000000, static_cast<std::size_t>((w_hi - w_lo) / dw) + 1);

  ScanResult best;
  double best_res = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid; ++k) {
    const double w = w_lo + dw * static_cast<double>(k);
    double res = 0.0;
    const double a = amplitude_at(d, w, &res);
    if (res < best_res) {
      best_res = res;
      best = {w, a};
    }
  }
  return best;
}

struct Normal2 {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;  // J^T W J, J = d(model)/d(omega,f)
  double b1 = 0.0, b2 = 0.0;               // J^T W r
  double chi2 = 0.0;
  double wsum = 0.0;
};

Normal2 assemble(const WeightedData& d, double omega, double f) {
  Normal2 n;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const double c = std::cos(omega * d.x[i]);
    const double s = std::sin(omega * d.x[i]);
    const double r = d.y[i] - 0.5 * f * c;
    const double jw = -0.5 * f * d.x[i] * s;
    const double jf = 0.5 * c;
    n.a11 += d.w[i] * jw * jw;
    n.a12 += d.w[i] * jw * jf;
    n.a22 += d.w[i] * jf * jf;
    n.b1 += d.w[i] * jw * r;
    n.b2 += d.w[i] * jf * r;
    n.chi2 += d.w[i] * r * r;
    n.wsum += d.w[i];
  }
  return n;
}

}  // namespace

RabiFit fit_rabi(const std::vector<FringePoint>& points, double omega_max) {
  const WeightedData d = prepare(points);
  const ScanResult seed = coarse_scan(d, omega_max);

  double omega = seed.omega;
  double f = std::clamp(2.0 * seed.amplitude, 0.0, 1.05);
  if (f < 1e-6) f = 0.1;  // give the refiner a usable gradient

  // Levenberg-Marquardt on (omega, f).
  double lambda = 1e-3;
  Normal2 cur = assemble(d, omega, f);
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const double a11 = cur.a11 * (1.0 + lambda);
    const double a22 = cur.a22 * (1.0 + lambda);
    const double det = a11 * a22 - cur.a12 * cur.a12;
    if (!(std::abs(det) > 0.0)) break;
    // Gauss-Newton step (J^T W J + lambda diag) delta = J^T W r.
    const double dw = (cur.b1 * a22 - cur.b2 * cur.a12) / det;
    const double df = (cur.b2 * a11 - cur.b1 * cur.a12) / det;
    const double omega_try = omega + dw;
    const double f_try = std::clamp(f + df, 0.0, 1.05);
    if (omega_try <= 0.0) {
      lambda *= 10.0;
      continue;
    }
    const Normal2 trial = assemble(d, omega_try, f_try);
    if (trial.chi2 < cur.chi2) {
      const double rel = std::abs(trial.chi2 - cur.chi2) /
                         std::max(1e-300, cur.chi2);
      omega = omega_try;
      f = f_try;
      cur = trial;
      lambda = std::max(lambda * 0.25, 1e-12);
      if (rel < 1e-12 || (std::abs(dw) < 1e-10 * omega && std::abs(df) < 1e-10)) {
        converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }

  RabiFit fit;
  fit.omega_g_hat = omega;
  fit.contrast_f = f;
  fit.converged = converged;
  fit.residual_rms = std::sqrt(std::max(0.0, cur.chi2 / cur.wsum));

  // Half-period coverage check against the fitted frequency.
  std::vector<double> xs = d.x;
  std::sort(xs.begin(), xs.end());
  if (omega * (xs.back() - xs.front()) < kPi)
    throw std::invalid_argument(
        "fit_rabi: samples span less than half a fringe period");

  const double det = cur.a11 * cur.a22 - cur.a12 * cur.a12;
  fit.omega_g_std = det > 0.0 ? std::sqrt(cur.a22 / det)
                              : std::numeric_limits<double>::infinity();
  return fit;
}

DecayFit fit_decay(const std::vector<double>& times,
                   const std::vector<double>& contrasts) {
  if (times.size() != contrasts.size())
    throw std::invalid_argument("fit_decay: size mismatch");
  std::vector<double> t, y;  // y = -log c
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(contrasts[i]))
      throw std::invalid_argument("fit_decay: non-finite sample");
    if (times[i] <= 0.0 || contrasts[i] <= 0.02 || contrasts[i] > 1.0 + 1e-9)
      continue;  // dead or out-of-model points carry no decay information
    t.push_back(times[i]);
    y.push_back(-std::log(std::min(contrasts[i], 1.0)));
  }
  if (t.size() < 5)
    throw std::invalid_argument("fit_decay needs at least five usable points");

  DecayFit best;
  double best_res = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int q = 1; q <= 2; ++q) {
    double suy = 0.0, su2 = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double u = std::pow(t[i], q);
      suy += u * y[i];
      su2 += u * u;
    }
    if (su2 <= 0.0) continue;
    const double m = suy / su2;
    if (m <= 0.0) continue;  // not decaying under this law
    double res = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = y[i] - m * std::pow(t[i], q);
      res += r * r;
    }
    if (res < best_res) {
      best_res = res;
      best.t2 = std::pow(m, -1.0 / q);
      best.exponent = q;
      best.residual_rms = std::sqrt(res / static_cast<double>(t.size()));
      found = true;
    }
  }
  if (!found)
    throw std::invalid_argument("fit_decay: data do not decay");
  return best;
}

double delta_omega(double delta_p, double slope, double t_window) {
  if (!(t_window > 0.0))
    throw std::invalid_argument("delta_omega: window must be positive");
  if (delta_p < 0.0)
    throw std::invalid_argument("delta_omega: negative population error");
  const double s = std::abs(slope);
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  return delta_p / (s * t_window);
}

Sensitivity sensitivity(double delta_omega_g, double total_time) {
  if (!(total_time > 0.0))
    throw std::invalid_argument("sensitivity: total time must be positive");
  Sensitivity out;
  out.s_rad = delta_omega_g * std::sqrt(total_time);
  out.s_hz = out.s_rad / kTwoPi;
  return out;
}

double sql(double t_window) {
  if (!(t_window > 0.0))
    throw std::invalid_argument("sql: window must be positive");
  return 1.0 / std::sqrt(t_window);
}

double omega_to_field(double s_rad, double kappa) {
  if (!(kappa > 0.0))
    throw std::invalid_argument("omega_to_field: coupling must be positive");
  return kappa * s_rad;
}

}  // namespace dsim
