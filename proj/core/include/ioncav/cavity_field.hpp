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

#pragma once

#include <complex>
#include <vector>

#include "ioncav/derived_params.hpp"

// Single-mode intracavity field of a cavity swept linearly through the
// injected laser frequency, in the laser rotating frame with E_in = 1:
//
//   dE/dt = (i Delta_c(t) - kappa) E + kappa,   Delta_c(t) = R t,
//
// where Delta_c is laser minus cavity detuning and R = nu_L kappa / tau_s.
// A positive nu_L (mirrors moving apart) red-shifts the stored light.
namespace ioncav::field {

struct SweepSpec {
  double nu_l = 0.16;
  double window_halfwidth = 20.0;  // sweep covers |Delta_c| <= W kappa
  int samples_per_tau = 50;

  void validate() const;
};

struct FieldTrajectory {
  std::vector<double> times;                       // s, uniform, symmetric about 0
  std::vector<std::complex<double>> amplitudes;    // E / E_in
  double peak_magnitude = 0.0;
  SweepSpec sweep;
  double kappa = 0.0;          // rad/s
  double storage_time = 0.0;   // s
  double detuning_slope = 0.0; // rad/s^2
  int substeps = 0;            // RK4 steps per output interval

  double start() const { return times.front(); }
  double end() const { return times.back(); }
};

// Static-cavity response kappa / (kappa - i Delta_c).
std::complex<double> steady_state_field(double delta_c, double kappa);

// Fixed-step RK4 on a grid aligned with the output samples. The step is
// halved until a further halving moves every sample by less than
// convergence_tol * peak; the finer of the two runs is returned.
FieldTrajectory integrate_swept_field(const params::CavityFigures& figures, const SweepSpec& sweep,
                                      double convergence_tol = 1e-6);

// Constant drive of a static cavity at fixed detuning, sampled on
// `intervals` (rounded up to even) steps over [0, duration].
FieldTrajectory static_field(double delta_c, double kappa, double duration, int intervals);

// Linear interpolation of real and imaginary parts. Throws ValidationError
// outside the trajectory span.
// Empty cavity switched on at t = 0 with a fixed detuning, integrated with
// the same RK4 stepper as the sweep. Tends to steady_state_field.
FieldTrajectory ring_up_field(double delta_c, double kappa, double duration, int intervals,
                              int substeps = 1);

std::complex<double> instantaneous_drive(const FieldTrajectory& traj, double t);

}  // namespace ioncav::field
