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

#include "ioncav/derived_params.hpp"

#include <string>

#include "ioncav/error.hpp"

namespace ioncav::params {

using detail::require_non_negative;
using detail::require_positive;

void CavityConfig::validate() const {
  require_positive(finesse, "cavity.finesse");
  require_positive(length, "cavity.length");
  require_positive(waist, "cavity.waist");
  require_positive(mirror_curvature, "cavity.mirror_curvature");
  require_positive(wavelength, "cavity.wavelength");
  if (!(length < 2.0 * mirror_curvature)) {
    throw ValidationError("cavity.length", "must be below twice the mirror curvature for a stable resonator");
  }
}

void TransitionConfig::validate() const {
  require_positive(wavelength, "transition.wavelength");
  require_positive(natural_linewidth_fwhm, "transition.natural_linewidth");
  require_positive(laser_linewidth_fwhm, "transition.laser_linewidth");
  require_positive(coupling_g, "transition.coupling_g");
}

void TrapMotionConfig::validate() const {
  static constexpr const char* kFreq[] = {"trap.freq_x", "trap.freq_y", "trap.freq_z"};
  static constexpr const char* kNbar[] = {"trap.nbar_x", "trap.nbar_y", "trap.nbar_z"};
  static constexpr const char* kCos[] = {"trap.cos_x", "trap.cos_y", "trap.cos_z"};
  double sum_sq = 0.0;
  for (int i = 0; i < 3; ++i) {
    require_positive(secular_frequencies[i], kFreq[i]);
    require_non_negative(mean_phonons[i], kNbar[i]);
    const double c = direction_cosines[i];
    if (!(std::abs(c) <= 1.0)) {
      throw ValidationError(kCos[i], "direction cosine must lie in [-1, 1]");
    }
    sum_sq += c * c;
  }
  require_positive(ion_mass, "trap.ion_mass_amu");
  if (sum_sq > 1.0 + 1e-9) {
    throw ValidationError("trap.cos_x", "squared direction cosines sum to " + std::to_string(sum_sq) + " > 1");
  }
}

CavityFigures derive_cavity_figures(const CavityConfig& cfg) {
  cfg.validate();
  CavityFigures out;
  out.fsr = PhysicalConstants::c / (2.0 * cfg.length);
  out.linewidth_fwhm = out.fsr / cfg.finesse;
  out.kappa_hwhm = kPi * out.linewidth_fwhm;
  out.storage_time = cfg.finesse * cfg.length / (kPi * PhysicalConstants::c);
  return out;
}

double laser_angular_frequency(const CavityConfig& cfg) {
  return kTwoPi * PhysicalConstants::c / cfg.wavelength;
}

namespace {

// nu_l per unit mirror velocity.
double scan_rate_per_velocity(const CavityConfig& cfg) {
  const CavityFigures fig = derive_cavity_figures(cfg);
  return 2.0 * cfg.finesse * laser_angular_frequency(cfg) * fig.storage_time / (kPi * PhysicalConstants::c);
}

}  // namespace

double normalized_scan_rate(double length_rate, const CavityConfig& cfg) {
  return scan_rate_per_velocity(cfg) * length_rate;
}

double scan_velocity(double nu_l, const CavityConfig& cfg) {
  return nu_l / scan_rate_per_velocity(cfg);
}

double detuning_slope(double nu_l, const CavityConfig& cfg) {
  const CavityFigures fig = derive_cavity_figures(cfg);
  return nu_l * fig.kappa_hwhm / fig.storage_time;
}

CooperativityFigures cooperativity_block(double g, double kappa, double gamma) {
  require_non_negative(g, "coupling_g");
  require_positive(kappa, "kappa");
  require_positive(gamma, "gamma");
  CooperativityFigures out;
  out.cooperativity = g * g / (2.0 * kappa * gamma);
  out.purcell = 2.0 * out.cooperativity + 1.0;
  out.beta = 2.0 * out.cooperativity / out.purcell;
  return out;
}

double wavepacket_extension(const TrapMotionConfig& cfg) {
  cfg.validate();
  double variance = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double c = cfg.direction_cosines[i];
    const double ground_sq = PhysicalConstants::hbar / (2.0 * cfg.ion_mass * cfg.secular_frequencies[i]);
    variance += c * c * (2.0 * cfg.mean_phonons[i] + 1.0) * ground_sq;
  }
  return std::sqrt(variance);
}

double contrast_factor(double extension, double wavelength) {
  require_non_negative(extension, "extension");
  require_positive(wavelength, "wavelength");
  const double phase = kTwoPi * extension / wavelength;
  return std::exp(-phase * phase);
}

}  // namespace ioncav::params
