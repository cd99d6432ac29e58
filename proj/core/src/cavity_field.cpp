// Copyright 2026 The ioncav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ioncav/cavity_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ioncav/error.hpp"

namespace ioncav::field {
namespace {

constexpr int kMaxHalvings = 8;
constexpr double kPassivityTol = 1e-6;

// Cavity detuning offset + slope t.
struct SweptRhs {
  double slope;
  double kappa;
  double offset = 0.0;
  std::complex<double> operator()(double t, std::complex<double> e) const {
    return std::complex<double>(-kappa, offset + slope * t) * e + kappa;
  }
};

std::vector<std::complex<double>> run(const SweptRhs& rhs, double t0, double dt, int intervals,
                                      int substeps, std::complex<double> e) {
  std::vector<std::complex<double>> out(intervals + 1);
  out[0] = e;
  const double h = dt / substeps;
  for (int i = 0; i < intervals; ++i) {
    const double base = t0 + i * dt;
    for (int j = 0; j < substeps; ++j) {
      const double t = base + j * h;
      const auto k1 = rhs(t, e);
      const auto k2 = rhs(t + 0.5 * h, e + (0.5 * h) * k1);
      const auto k3 = rhs(t + 0.5 * h, e + (0.5 * h) * k2);
      const auto k4 = rhs(t + h, e + h * k3);
      e += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out[i + 1] = e;
  }
  return out;
}

double max_deviation(const std::vector<std::complex<double>>& a,
                     const std::vector<std::complex<double>>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

void SweepSpec::validate() const {
  if (!(nu_l != 0.0) || !std::isfinite(nu_l)) {
    throw ValidationError("sweep.nu_l", "swept runs need a finite non-zero scan rate");
  }
  if (!(window_halfwidth >= 5.0)) {
    throw ValidationError("sweep.window_halfwidth", "must be at least 5 linewidths");
  }
  if (samples_per_tau < 20) {
    throw ValidationError("sweep.samples_per_tau", "must be at least 20");
  }
}

std::complex<double> steady_state_field(double delta_c, double kappa) {
  detail::require_positive(kappa, "kappa");
  return kappa / std::complex<double>(kappa, -delta_c);
}

FieldTrajectory integrate_swept_field(const params::CavityFigures& figures, const SweepSpec& sweep,
                                      double convergence_tol) {
  sweep.validate();
  detail::require_positive(figures.kappa_hwhm, "kappa");
  detail::require_positive(figures.storage_time, "storage_time");

  const double kappa = figures.kappa_hwhm;
  const double tau = figures.storage_time;
  const double slope = sweep.nu_l * kappa / tau;
  const double half_span = sweep.window_halfwidth * kappa / std::abs(slope);

  // Even interval count keeps every other sample available as an RK4 midpoint.
  int intervals = static_cast<int>(std::ceil(2.0 * half_span * sweep.samples_per_tau / tau));
  intervals += intervals % 2;
  const double dt = 2.0 * half_span / intervals;
  const double target_step = std::min(tau, 1.0 / std::sqrt(std::abs(slope))) / 200.0;
  int substeps = std::max(1, static_cast<int>(std::ceil(dt / target_step)));

  const SweptRhs rhs{slope, kappa};
  const double t0 = -half_span;
  const std::complex<double> e0 = steady_state_field(slope * t0, kappa);
  auto coarse = run(rhs, t0, dt, intervals, substeps, e0);
  for (int halving = 0;; ++halving) {
    auto fine = run(rhs, t0, dt, intervals, 2 * substeps, e0);
    double peak = 0.0;
    for (const auto& e : fine) peak = std::max(peak, std::abs(e));
    const double deviation = max_deviation(coarse, fine);
    if (deviation < convergence_tol * peak) {
      substeps *= 2;
      coarse = std::move(fine);
      break;
    }
    if (halving == kMaxHalvings) {
      throw NumericalError("swept-field integration did not converge under step halving (deviation " +
                           std::to_string(deviation / peak) + " of peak)");
    }
    substeps *= 2;
    coarse = std::move(fine);
  }

  FieldTrajectory traj;
  traj.sweep = sweep;
  traj.kappa = kappa;
  traj.storage_time = tau;
  traj.detuning_slope = slope;
  traj.substeps = substeps;
  traj.amplitudes = std::move(coarse);
  traj.times.resize(intervals + 1);
  for (int i = 0; i <= intervals; ++i) traj.times[i] = t0 + i * dt;
  traj.times.back() = half_span;
  for (const auto& e : traj.amplitudes) traj.peak_magnitude = std::max(traj.peak_magnitude, std::abs(e));
  if (traj.peak_magnitude > 1.0 + kPassivityTol) {
    throw NumericalError("swept field exceeds the input amplitude: |E| = " +
                         std::to_string(traj.peak_magnitude));
  }
  return traj;
}

FieldTrajectory static_field(double delta_c, double kappa, double duration, int intervals) {
  detail::require_positive(duration, "duration");
  if (intervals < 2) throw ValidationError("intervals", "must be at least 2");
  intervals += intervals % 2;
  FieldTrajectory traj;
  traj.kappa = kappa;
  traj.storage_time = 0.5 / kappa;
  traj.times.resize(intervals + 1);
  for (int i = 0; i <= intervals; ++i) traj.times[i] = duration * i / intervals;
  traj.amplitudes.assign(intervals + 1, steady_state_field(delta_c, kappa));
  traj.peak_magnitude = std::abs(traj.amplitudes.front());
  return traj;
}

FieldTrajectory ring_up_field(double delta_c, double kappa, double duration, int intervals, int substeps) {
  detail::require_positive(kappa, "kappa");
  detail::require_positive(duration, "duration");
  if (intervals < 2) throw ValidationError("intervals", "must be at least 2");
  if (substeps < 1) throw ValidationError("substeps", "must be positive");
  if (!std::isfinite(delta_c)) throw ValidationError("delta_c", "must be finite");
  intervals += intervals % 2;
  FieldTrajectory traj;
  traj.kappa = kappa;
  traj.storage_time = 0.5 / kappa;
  traj.substeps = substeps;
  const SweptRhs rhs{0.0, kappa, delta_c};
  traj.amplitudes = run(rhs, 0.0, duration / intervals, intervals, substeps, {0.0, 0.0});
  traj.times.resize(intervals + 1);
  for (int i = 0; i <= intervals; ++i) traj.times[i] = duration * i / intervals;
  for (const auto& e : traj.amplitudes) traj.peak_magnitude = std::max(traj.peak_magnitude, std::abs(e));
  return traj;
}

std::complex<double> instantaneous_drive(const FieldTrajectory& traj, double t) {
  if (traj.times.empty() || !(t >= traj.start() && t <= traj.end())) {
    throw ValidationError("t", "outside the field trajectory span");
  }
  const auto it = std::upper_bound(traj.times.begin(), traj.times.end(), t);
  if (it == traj.times.end()) return traj.amplitudes.back();
  const std::size_t hi = static_cast<std::size_t>(it - traj.times.begin());
  const std::size_t lo = hi - 1;
  const double t_lo = traj.times[lo];
  if (t == t_lo) return traj.amplitudes[lo];
  const double u = (t - t_lo) / (traj.times[hi] - t_lo);
  return traj.amplitudes[lo] + u * (traj.amplitudes[hi] - traj.amplitudes[lo]);
}

}  // namespace ioncav::field
