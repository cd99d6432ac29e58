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

// Quantized motion along the cavity axis: Lamb-Dicke parameters, Fock-basis
// matrix elements of travelling- and standing-wave couplings, and thermal
// phonon statistics.
namespace ioncav::motion {

enum class Transition { kCarrier, kRedSideband, kBlueSideband };

// Change of phonon number driven by the transition: 0, -1 or +1.
int phonon_change(Transition t);
const char* to_string(Transition t);

struct MotionalMode {
  double omega = 0.0;   // rad/s
  double n_bar = 0.0;
  double x0 = 0.0;      // ground-state size sqrt(hbar / 2 m omega), m
  double eta = 0.0;     // Lamb-Dicke parameter along the cavity axis
};

// Mode i (0 = x, 1 = y, 2 = z) of the trap projected on a standing wave of
// the given wavelength.
MotionalMode make_mode(const params::TrapMotionConfig& trap, int axis, double wavelength);

struct ThermalDistribution {
  double n_bar = 0.0;
  int n_max = 0;
  std::vector<double> probabilities;  // p_0 .. p_{n_max}, sums to 1
};

double lamb_dicke(double omega, double mass, double wavelength, double direction_cosine);

// Generalized Laguerre polynomial L_n^alpha(x) by upward recurrence.
double laguerre(int n, int alpha, double x);

// <n'| exp(i eta (a + a^dagger)) |n>. Factorial ratios are evaluated in log
// space and the recurrence is rescaled, so large n stay finite.
std::complex<double> tw_matrix_element(int n, int n_prime, double eta);

// <n'| cos(k x + phi) |n>; phi = 0 is a node of E ~ sin(kx), i.e. the point
// of maximal carrier coupling. The result is real. Quadrant multiples of phi
// are treated exactly so parity-forbidden elements vanish identically.
double sw_matrix_element(int n, int n_prime, double eta, double phi);

ThermalDistribution thermal_distribution(double n_bar, double tail_epsilon);

struct CouplingProfile {
  std::vector<double> weights;  // w_n = p_n |<n + dn| cos(kx + phi) |n>|^2
  double total = 0.0;
};

// Channel weights for one transition. position_contrast < 1 averages the
// standing-wave phase over a quasi-static Gaussian spread whose intensity
// contrast equals position_contrast; 1 reproduces the bare matrix elements.
CouplingProfile coupling_profile(Transition transition, const MotionalMode& mode,
                                 const ThermalDistribution& dist, double phi,
                                 double position_contrast = 1.0);

// Squared coupling of a single channel (no thermal weight).
double channel_weight(Transition transition, int n, double eta, double phi,
                      double position_contrast = 1.0);

// Thermal average of |<n|exp(ikx)|n>|^2 = exp(-eta^2) L_n(eta^2)^2; the
// carrier Debye-Waller reduction contributed by one mode.
double thermal_debye_waller(const MotionalMode& mode, const ThermalDistribution& dist);

}  // namespace ioncav::motion
