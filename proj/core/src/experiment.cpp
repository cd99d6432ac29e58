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

#include "ioncav/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ioncav/error.hpp"
#include "ioncav/numeric.hpp"

namespace ioncav::experiment {
namespace {

constexpr double kDefaultHalfSpanHz = 60e3;
constexpr double kSaturationWarning = 0.2;

bloch::DriveSpec base_drive(const ExperimentSetup& setup, double omega_max) {
  bloch::DriveSpec drive;
  drive.omega_peak = omega_max * setup.spectator_scale;
  drive.gamma_pop = setup.transition.gamma();
  drive.gamma_laser = setup.transition.gamma_laser();
  return drive;
}

field::FieldTrajectory swept_field(const ExperimentSetup& setup, double nu_l) {
  field::SweepSpec sweep = setup.sweep;
  sweep.nu_l = nu_l;
  return field::integrate_swept_field(params::derive_cavity_figures(setup.cavity), sweep);
}

std::string phase_context(double phi) {
  std::ostringstream s;
  s << "phi = " << phi << " rad";
  return s.str();
}

PositionScan make_scan(const std::vector<double>& phi_grid) {
  PositionScan scan;
  scan.phases = phi_grid;
  scan.values.resize(phi_grid.size());
  scan.value_errors.resize(phi_grid.size());
  return scan;
}

}  // namespace

void ExperimentSetup::validate() const {
  cavity.validate();
  transition.validate();
  trap.validate();
  if (!(tail_epsilon > 0.0 && tail_epsilon < 1.0)) {
    throw ValidationError("tail_epsilon", "must lie in (0, 1)");
  }
  if (!(spectator_scale > 0.0 && spectator_scale <= 1.0)) {
    throw ValidationError("spectator_scale", "must lie in (0, 1]");
  }
}

motion::MotionalMode axial_mode(const ExperimentSetup& setup) {
  motion::MotionalMode mode = motion::make_mode(setup.trap, 2, setup.transition.wavelength);
  if (setup.point_ion) mode.eta = 0.0;
  return mode;
}

motion::ThermalDistribution axial_distribution(const ExperimentSetup& setup) {
  return motion::thermal_distribution(setup.trap.mean_phonons[2], setup.tail_epsilon);
}

double position_contrast(const ExperimentSetup& setup) {
  if (setup.point_ion || !setup.thermal_position_averaging) return 1.0;
  return params::contrast_factor(params::wavepacket_extension(setup.trap), setup.transition.wavelength);
}

std::vector<double> DetuningGrid::values() const {
  if (points < 2) throw ValidationError("grid.points", "need at least 2 points");
  if (!(half_span > 0.0)) throw ValidationError("grid.half_span", "must be positive");
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) {
    out[i] = center + half_span * (2.0 * i / (points - 1) - 1.0);
  }
  return out;
}

DetuningGrid default_grid(const ExperimentSetup& setup, double nu_l, Transition transition) {
  const double kappa = params::derive_cavity_figures(setup.cavity).kappa_hwhm;
  DetuningGrid grid;
  grid.center = nu_l * kappa + motion::phonon_change(transition) * setup.trap.secular_frequencies[2];
  grid.half_span = kTwoPi * kDefaultHalfSpanHz;
  grid.points = 121;
  return grid;
}

std::vector<double> Spectrum::observed() const {
  if (!counts) return probabilities;
  std::vector<double> out(counts->size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>((*counts)[i].first) / (*counts)[i].second;
  }
  return out;
}

Spectrum simulate_spectrum_on_field(const ExperimentSetup& setup, const field::FieldTrajectory& field,
                                    double omega_max, double phi, Transition transition,
                                    const DetuningGrid& grid, const SamplingSpec& sampling) {
  setup.validate();
  detail::require_non_negative(omega_max, "omega_max");
  const motion::MotionalMode mode = axial_mode(setup);
  const motion::ThermalDistribution dist = axial_distribution(setup);
  const double contrast = position_contrast(setup);

  Spectrum out;
  out.detunings = grid.values();
  out.probabilities.resize(out.detunings.size());
  bloch::DriveSpec drive = base_drive(setup, omega_max);
  for (std::size_t i = 0; i < out.detunings.size(); ++i) {
    drive.detuning = out.detunings[i];
    try {
      out.probabilities[i] =
          bloch::excitation_probability(drive, field, dist, transition, mode, phi, contrast);
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << e.what() << " [detuning = " << out.detunings[i] / kTwoPi << " Hz, " << phase_context(phi) << "]";
      throw NumericalError(msg.str());
    }
  }
  if (sampling.enabled) {
    std::vector<std::pair<int, int>> counts(out.detunings.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const DetectionSample s = sample_detection(out.probabilities[i], sampling.n_repeats, sampling.fidelity,
                                                 stream_seed(sampling.seed, i));
      counts[i] = {s.shelved, sampling.n_repeats};
    }
    out.counts = std::move(counts);
  }
  return out;
}

Spectrum simulate_spectrum(const ExperimentSetup& setup, double nu_l, double omega_max, double phi,
                           Transition transition, const DetuningGrid& grid, const SamplingSpec& sampling) {
  setup.validate();
  return simulate_spectrum_on_field(setup, swept_field(setup, nu_l), omega_max, phi, transition, grid,
                                    sampling);
}

std::vector<double> phase_grid(int points) {
  if (points < 3) throw ValidationError("phi_points", "need at least 3 phases");
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) out[i] = kPi * i / points;
  return out;
}

StandingWaveScan standing_wave_scan(const ExperimentSetup& setup, double nu_l, double omega_max,
                                    const std::vector<double>& phi_grid) {
  setup.validate();
  const field::FieldTrajectory field = swept_field(setup, nu_l);
  const DetuningGrid grid = default_grid(setup, nu_l, Transition::kCarrier);

  StandingWaveScan out;
  out.scan = make_scan(phi_grid);
  for (std::size_t i = 0; i < phi_grid.size(); ++i) {
    const Spectrum spec =
        simulate_spectrum_on_field(setup, field, omega_max, phi_grid[i], Transition::kCarrier, grid);
    const auto [lo, hi] = std::minmax_element(spec.probabilities.begin(), spec.probabilities.end());
    out.max_probability = std::max(out.max_probability, *hi);
    FitResult fit = fit_lorentzian(spec.detunings, spec.probabilities);
    if (*hi - *lo <= 1e-14 * std::max(1.0, std::abs(*hi))) {
      // A flat spectrum carries its level and nothing to fit.
      out.scan.values[i] = *hi;
      out.scan.value_errors[i] = 0.0;
    } else if (!fit.converged) {
      throw NumericalError("Lorentzian fit did not converge at " + phase_context(phi_grid[i]));
    } else {
      out.scan.values[i] = fit.at("peak") + fit.at("offset");
      out.scan.value_errors[i] = std::hypot(fit.error("peak"), fit.error("offset"));
    }
    out.spectrum_fits.push_back(std::move(fit));
  }
  out.saturation_warning = out.max_probability > kSaturationWarning;
  out.sin2 = fit_sin2(out.scan.phases, out.scan.values);
  return out;
}

double integral_excitation(const Spectrum& spectrum) {
  const std::vector<double> y = spectrum.observed();
  CompensatedSum area;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    const double dx_hz = (spectrum.detunings[i + 1] - spectrum.detunings[i]) / kTwoPi;
    area += 0.5 * dx_hz * (y[i] + y[i + 1]);
  }
  return area.value();
}

double balanced_sideband_rabi(const ExperimentSetup& setup, double omega_carrier) {
  const motion::MotionalMode mode = axial_mode(setup);
  const motion::ThermalDistribution dist = axial_distribution(setup);
  const double carrier = motion::coupling_profile(Transition::kCarrier, mode, dist, 0.0).total;
  const double sideband = motion::coupling_profile(Transition::kRedSideband, mode, dist, 0.5 * kPi).total;
  if (!(sideband > 0.0)) return omega_carrier;
  return omega_carrier * std::sqrt(carrier / sideband);
}

CarrierSidebandScan carrier_sideband_scan(const ExperimentSetup& setup, double nu_l,
                                          const std::vector<double>& phi_grid, double omega_carrier,
                                          double omega_sideband) {
  setup.validate();
  CarrierSidebandScan out;
  out.omega_carrier = omega_carrier;
  out.omega_sideband = omega_sideband > 0.0 ? omega_sideband : balanced_sideband_rabi(setup, omega_carrier);

  const field::FieldTrajectory field = swept_field(setup, nu_l);
  const DetuningGrid carrier_grid = default_grid(setup, nu_l, Transition::kCarrier);
  const DetuningGrid sideband_grid = default_grid(setup, nu_l, Transition::kRedSideband);
  out.carrier = make_scan(phi_grid);
  out.sideband = make_scan(phi_grid);
  for (std::size_t i = 0; i < phi_grid.size(); ++i) {
    out.carrier.values[i] = integral_excitation(simulate_spectrum_on_field(
        setup, field, out.omega_carrier, phi_grid[i], Transition::kCarrier, carrier_grid));
    out.sideband.values[i] = integral_excitation(simulate_spectrum_on_field(
        setup, field, out.omega_sideband, phi_grid[i], Transition::kRedSideband, sideband_grid));
  }
  out.carrier_fit = fit_sin2(out.carrier.phases, out.carrier.values);
  out.sideband_fit = fit_sin2(out.sideband.phases, out.sideband.values);
  double diff = 2.0 * (out.carrier_fit.fit.at("phase") - out.sideband_fit.fit.at("phase"));
  diff = std::fmod(diff, kTwoPi);
  if (diff < 0.0) diff += kTwoPi;
  out.phase_difference = diff;
  return out;
}

double positioning_precision(const Sin2Fit& fit, double sigma_p, double phi, double wavelength) {
  detail::require_non_negative(sigma_p, "sigma_p");
  detail::require_positive(wavelength, "wavelength");
  if (!fit.fit.converged) throw ValidationError("fit", "sin^2 fit did not converge");
  const double amplitude = fit.fit.at("amplitude");
  if (!(amplitude > 0.0)) throw ValidationError("fit", "zero fringe amplitude carries no position information");
  if (sigma_p == 0.0) return 0.0;

  // One intensity period (pi in phase) spans lambda / 2 of displacement.
  const double k = kTwoPi / wavelength;
  const double theta = 2.0 * (phi + fit.fit.at("phase"));
  const double slope = amplitude * k * std::abs(std::sin(theta));
  const double curvature = 2.0 * amplitude * k * k * std::abs(std::cos(theta));
  const double first_order = slope > 0.0 ? sigma_p / slope : std::numeric_limits<double>::infinity();
  const double second_order =
      curvature > 0.0 ? std::sqrt(2.0 * sigma_p / curvature) : std::numeric_limits<double>::infinity();
  return std::min(first_order, second_order);
}

}  // namespace ioncav::experiment
