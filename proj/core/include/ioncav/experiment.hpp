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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ioncav/bloch.hpp"
#include "ioncav/cavity_field.hpp"
#include "ioncav/derived_params.hpp"
#include "ioncav/detection.hpp"
#include "ioncav/fitting.hpp"
#include "ioncav/motion.hpp"

// Orchestration of the three measurement types: detuning spectra at a given
// scan rate, standing-wave position scans, and carrier / red-sideband
// integral-excitation scans, plus positioning precision.
namespace ioncav::experiment {

using motion::Transition;

struct ExperimentSetup {
  params::CavityConfig cavity;
  params::TransitionConfig transition;
  params::TrapMotionConfig trap;
  field::SweepSpec sweep{0.16, 20.0, 20};
  double tail_epsilon = 1e-4;
  // Ion at rest: eta = 0 and no thermal smearing of the standing-wave phase.
  bool point_ion = false;
  // Average the standing-wave phase over the thermal wave packet so that the
  // intensity contrast drops by params::contrast_factor.
  bool thermal_position_averaging = true;
  // Spectator-mode Debye-Waller reduction folded into the Rabi frequency.
  double spectator_scale = 1.0;

  void validate() const;
};

// Axial (z) mode, the one resolved in sideband spectra.
motion::MotionalMode axial_mode(const ExperimentSetup& setup);
motion::ThermalDistribution axial_distribution(const ExperimentSetup& setup);
// Intensity contrast applied to the standing-wave phase (1 when disabled).
double position_contrast(const ExperimentSetup& setup);

struct DetuningGrid {
  double center = 0.0;      // rad/s
  double half_span = 0.0;   // rad/s
  int points = 121;

  std::vector<double> values() const;
};

// 121 points over +-60 kHz around the drive-spectrum centroid nu_L * kappa,
// offset by the sideband frequency for sideband transitions.
DetuningGrid default_grid(const ExperimentSetup& setup, double nu_l, Transition transition);

struct SamplingSpec {
  bool enabled = false;
  int n_repeats = 100;
  double fidelity = 0.99;
  std::uint64_t seed = 1;
};

struct Spectrum {
  std::vector<double> detunings;      // rad/s, strictly increasing
  std::vector<double> probabilities;  // simulated, in [0, 1]
  std::optional<std::vector<std::pair<int, int>>> counts;  // (shelved, total)
  std::vector<std::pair<std::string, std::string>> meta;

  // Sampled estimates when counts are present, else the simulated values.
  std::vector<double> observed() const;
};

struct PositionScan {
  std::vector<double> phases;   // standing-wave phase, rad
  std::vector<double> values;
  std::vector<double> value_errors;
};

// Evaluates the spectrum on an already integrated field trajectory.
Spectrum simulate_spectrum_on_field(const ExperimentSetup& setup, const field::FieldTrajectory& field,
                                    double omega_max, double phi, Transition transition,
                                    const DetuningGrid& grid, const SamplingSpec& sampling = {});

Spectrum simulate_spectrum(const ExperimentSetup& setup, double nu_l, double omega_max, double phi,
                           Transition transition, const DetuningGrid& grid,
                           const SamplingSpec& sampling = {});

// `points` phases uniformly covering one intensity period [0, pi).
std::vector<double> phase_grid(int points);

struct StandingWaveScan {
  PositionScan scan;
  std::vector<FitResult> spectrum_fits;
  Sin2Fit sin2;
  double max_probability = 0.0;
  bool saturation_warning = false;  // peak excitation above 0.2
};

// Peak of a Lorentzian fitted to each spectrum, as a function of phase.
StandingWaveScan standing_wave_scan(const ExperimentSetup& setup, double nu_l, double omega_max,
                                    const std::vector<double>& phi_grid);

struct CarrierSidebandScan {
  PositionScan carrier;
  PositionScan sideband;
  Sin2Fit carrier_fit;
  Sin2Fit sideband_fit;
  double omega_carrier = 0.0;
  double omega_sideband = 0.0;
  // Fitted phase difference in the intensity-period coordinate 2 phi, in [0, 2 pi).
  double phase_difference = 0.0;
};

// Rabi frequency for the red sideband that matches the thermally averaged
// maximal coupling of the carrier.
double balanced_sideband_rabi(const ExperimentSetup& setup, double omega_carrier);

// Integral excitation (trapezoidal area in probability x Hz) of carrier and
// red-sideband spectra versus phase. omega_sideband <= 0 selects
// balanced_sideband_rabi.
CarrierSidebandScan carrier_sideband_scan(const ExperimentSetup& setup, double nu_l,
                                          const std::vector<double>& phi_grid, double omega_carrier,
                                          double omega_sideband = 0.0);

double integral_excitation(const Spectrum& spectrum);

// Position uncertainty for a probability uncertainty sigma_p at phase phi on
// a fitted sin^2 fringe; the second-order estimate takes over near extrema.
double positioning_precision(const Sin2Fit& fit, double sigma_p, double phi, double wavelength);

// Linear map between offset-piezo voltage and standing-wave phase.
struct PiezoCalibration {
  double zero_volts = 0.0;
  double radians_per_volt = 1.0;

  double phase(double volts) const { return (volts - zero_volts) * radians_per_volt; }
  double volts(double phase) const { return zero_volts + phase / radians_per_volt; }
};

}  // namespace ioncav::experiment
