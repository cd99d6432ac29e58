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

#include "ioncav/cavity_field.hpp"
#include "ioncav/motion.hpp"

// Two-level optical Bloch equations for the S-D qubit in the laser frame:
//
//   d rho_ee / dt = -gamma rho_ee + Im(conj(Omega) rho_eg)
//   d rho_eg / dt = (i Delta - gamma_perp) rho_eg + (i/2) Omega (1 - 2 rho_ee)
//
// with Omega(t) = omega_peak sqrt(motional_weight) E(t) and
// gamma_perp = gamma / 2 + gamma_laser.
namespace ioncav::bloch {

struct BlochState {
  double rho_ee = 0.0;
  std::complex<double> coherence{0.0, 0.0};  // rho_eg
};

struct DriveSpec {
  double omega_peak = 0.0;       // rad/s at unit field and maximal coupling
  double motional_weight = 1.0;  // |<n'|cos(kx + phi)|n>|^2
  double detuning = 0.0;         // laser minus atom, rad/s
  double gamma_pop = 0.0;        // rad/s
  double gamma_laser = 0.0;      // rad/s

  void validate() const;
};

struct BlochSample {
  double time = 0.0;
  BlochState state;
};

struct BlochResult {
  BlochState final_state;
  std::vector<BlochSample> trajectory;  // empty unless requested
};

// Integrates from the ground state across the whole field trajectory. RK4
// steps span two field samples, using the middle one as the midpoint value,
// so no interpolation enters the drive.
BlochResult integrate_bloch(const DriveSpec& drive, const field::FieldTrajectory& field,
                            bool record_trajectory = false);

// Thermal average over phonon channels of one transition. Channel n sees the
// detuning drive.detuning - dn * mode.omega and the weight of
// motion::channel_weight; drive.motional_weight is ignored.
double excitation_probability(const DriveSpec& drive, const field::FieldTrajectory& field,
                              const motion::ThermalDistribution& dist,
                              motion::Transition transition, const motion::MotionalMode& mode,
                              double phi, double position_contrast = 1.0);

}  // namespace ioncav::bloch
