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

#include <array>
#include <cmath>

#include "ioncav/constants.hpp"

// Physical configuration of the ion-cavity system and the closed-form
// quantities derived from it. All rates and frequencies are angular (rad/s).
namespace ioncav::params {

struct CavityConfig {
  double finesse = 35000.0;
  double length = 21e-3;              // m
  double waist = 54e-6;               // m
  double mirror_curvature = 25e-3;    // m
  double wavelength = 729e-9;         // m

  // Throws ValidationError naming the first offending field.
  void validate() const;
};

struct CavityFigures {
  double fsr = 0.0;              // Hz
  double linewidth_fwhm = 0.0;   // Hz
  double kappa_hwhm = 0.0;       // rad/s, amplitude decay rate
  double storage_time = 0.0;     // s, energy 1/e time
};

struct TransitionConfig {
  double wavelength = 729e-9;    // m
  double natural_linewidth_fwhm = 0.17;  // Hz
  double laser_linewidth_fwhm = 6e3;     // Hz
  double coupling_g = kTwoPi * 134.0;    // rad/s

  void validate() const;

  // Population decay rate 2*pi*natural linewidth.
  double gamma() const { return kTwoPi * natural_linewidth_fwhm; }
  // Extra coherence decay from a Lorentzian laser line.
  double gamma_laser() const { return kPi * laser_linewidth_fwhm; }
};

// Index order is (x, y, z); z is the trap axis.
struct TrapMotionConfig {
  std::array<double, 3> secular_frequencies{kTwoPi * 2.9e6, kTwoPi * 3.9e6, kTwoPi * 7.4e6};
  std::array<double, 3> mean_phonons{22.9, 4.3, 4.9};
  double ion_mass = 40.0 * PhysicalConstants::amu;
  std::array<double, 3> direction_cosines{0.5, 0.5, 0.70710678118654752};

  void validate() const;
};

struct CooperativityFigures {
  double cooperativity = 0.0;
  double purcell = 1.0;
  double beta = 0.0;
};

CavityFigures derive_cavity_figures(const CavityConfig& cfg);

// Laser angular frequency 2*pi*c/lambda for the cavity wavelength.
double laser_angular_frequency(const CavityConfig& cfg);

// Normalized scan rate: detuning change in HWHM linewidths per storage time.
double normalized_scan_rate(double length_rate, const CavityConfig& cfg);
double scan_velocity(double nu_l, const CavityConfig& cfg);

// Rate of change of the laser-cavity detuning (rad/s^2) implied by nu_l.
double detuning_slope(double nu_l, const CavityConfig& cfg);

CooperativityFigures cooperativity_block(double g, double kappa, double gamma);

// RMS extension of the thermal wave packet projected on the cavity axis (m).
double wavepacket_extension(const TrapMotionConfig& cfg);

// Thermal reduction of the standing-wave excitation contrast, exp(-(2 pi a_c / lambda)^2).
double contrast_factor(double extension, double wavelength);

}  // namespace ioncav::params
