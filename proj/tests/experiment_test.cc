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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ioncav/constants.hpp"
#include "ioncav/error.hpp"

using namespace ioncav;
using namespace ioncav::experiment;

namespace {

constexpr double kKappa = 640697.812009814;

DetuningGrid centered_grid(int points) {
  DetuningGrid g;
  g.center = 0.0;
  g.half_span = kTwoPi * 80e3;
  g.points = points;
  return g;
}

}  // namespace

TEST(Setup, defaults_and_helpers) {
  ExperimentSetup s;
  EXPECT_NO_THROW(s.validate());
  EXPECT_NEAR(axial_mode(s).eta, 0.02518257211681663, 1e-12);
  EXPECT_NEAR(position_contrast(s), 0.950762743378382, 1e-12);
  EXPECT_NEAR(axial_distribution(s).n_bar, 4.9, 0.0);
  s.point_ion = true;
  EXPECT_EQ(axial_mode(s).eta, 0.0);
  EXPECT_EQ(position_contrast(s), 1.0);
  s = ExperimentSetup{};
  s.thermal_position_averaging = false;
  EXPECT_EQ(position_contrast(s), 1.0);
  s.tail_epsilon = 0.0;
  EXPECT_THROW(s.validate(), ValidationError);
}

TEST(Grid, default_center_and_values) {
  const ExperimentSetup s;
  const DetuningGrid c = default_grid(s, 0.16, Transition::kCarrier);
  EXPECT_NEAR(c.center, 0.16 * kKappa, 1e-6);
  const DetuningGrid r = default_grid(s, -0.23, Transition::kRedSideband);
  EXPECT_NEAR(r.center, -0.23 * kKappa - kTwoPi * 7.4e6, 1e-3);
  const auto v = c.values();
  ASSERT_EQ(v.size(), 121u);
  EXPECT_NEAR(v.front(), c.center - c.half_span, 1e-9);
  EXPECT_NEAR(v.back(), c.center + c.half_span, 1e-9);
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  DetuningGrid bad = c;
  bad.points = 1;
  EXPECT_THROW(bad.values(), ValidationError);
}

TEST(Spectrum, zero_drive_is_flat_zero) {
  const Spectrum s = simulate_spectrum(ExperimentSetup{}, 0.16, 0.0, 0.0, Transition::kCarrier, centered_grid(11));
  for (double p : s.probabilities) EXPECT_EQ(p, 0.0);
}

TEST(Spectrum, scan_direction_mirrors_spectrum) {
  ExperimentSetup s;
  const double omega = kTwoPi * 15.5e3;
  const Spectrum up = simulate_spectrum(s, 0.23, omega, 0.0, Transition::kCarrier, centered_grid(21));
  const Spectrum down = simulate_spectrum(s, -0.23, omega, 0.0, Transition::kCarrier, centered_grid(21));
  for (std::size_t i = 0; i < up.probabilities.size(); ++i) {
    EXPECT_NEAR(up.probabilities[i], down.probabilities[up.probabilities.size() - 1 - i], 1e-14);
  }
  // Positive scan rate moves weight to the blue.
  const auto peak = std::max_element(up.probabilities.begin(), up.probabilities.end());
  EXPECT_GT(up.detunings[peak - up.probabilities.begin()], 0.0);
}

TEST(Spectrum, probabilities_bounded) {
  const Spectrum s =
      simulate_spectrum(ExperimentSetup{}, 0.46, kTwoPi * 60e3, 0.3, Transition::kCarrier, centered_grid(15));
  for (double p : s.probabilities) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(Spectrum, sampling_is_seeded) {
  ExperimentSetup s;
  s.point_ion = true;
  SamplingSpec sampling;
  sampling.enabled = true;
  sampling.seed = 11;
  const auto field = field::integrate_swept_field(params::derive_cavity_figures(s.cavity), s.sweep);
  const DetuningGrid g = default_grid(s, 0.16, Transition::kCarrier);
  DetuningGrid small = g;
  small.points = 15;
  const Spectrum a = simulate_spectrum_on_field(s, field, kTwoPi * 15.5e3, 0.0, Transition::kCarrier, small, sampling);
  const Spectrum b = simulate_spectrum_on_field(s, field, kTwoPi * 15.5e3, 0.0, Transition::kCarrier, small, sampling);
  ASSERT_TRUE(a.counts.has_value());
  EXPECT_EQ(*a.counts, *b.counts);
  sampling.seed = 12;
  const Spectrum c = simulate_spectrum_on_field(s, field, kTwoPi * 15.5e3, 0.0, Transition::kCarrier, small, sampling);
  EXPECT_NE(*a.counts, *c.counts);
  const auto obs = a.observed();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    EXPECT_EQ(obs[i], (*a.counts)[i].first / 100.0);
  }
}

TEST(Integral, trapezoid_in_hertz) {
  Spectrum s;
  for (int i = 0; i <= 10; ++i) {
    s.detunings.push_back(kTwoPi * 100.0 * i);
    s.probabilities.push_back(0.5);
  }
  EXPECT_NEAR(integral_excitation(s), 500.0, 1e-12);
}

TEST(PhaseGrid, covers_half_open_period) {
  const auto g = phase_grid(16);
  ASSERT_EQ(g.size(), 16u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_NEAR(g[1], kPi / 16.0, 1e-15);
  EXPECT_LT(g.back(), kPi);
  EXPECT_THROW(phase_grid(2), ValidationError);
}

TEST(Sideband, balanced_rabi_frequency) {
  const ExperimentSetup s;
  const double omega = kTwoPi * 4e3;
  const double balanced = balanced_sideband_rabi(s, omega);
  EXPECT_GT(balanced, 5.0 * omega);
  ExperimentSetup ground = s;
  ground.trap.mean_phonons = {0.0, 0.0, 0.0};
  EXPECT_EQ(balanced_sideband_rabi(ground, omega), omega);
}

TEST(Sideband, red_sideband_dark_at_node_in_ground_state) {
  ExperimentSetup s;
  s.trap.mean_phonons[2] = 0.0;
  const CarrierSidebandScan r = carrier_sideband_scan(s, -0.23, {0.0, kPi / 3.0, 2.0 * kPi / 3.0}, kTwoPi * 4e3,
                                                      kTwoPi * 40e3);
  EXPECT_EQ(r.sideband.values[0], 0.0);
  EXPECT_EQ(r.sideband.values[1], 0.0);
  EXPECT_GT(r.carrier.values[0], 0.0);
}

TEST(StandingWave, point_ion_fringe) {
  ExperimentSetup s;
  s.point_ion = true;
  const StandingWaveScan r = standing_wave_scan(s, 0.16, kTwoPi * 3e3, phase_grid(8));
  EXPECT_GT(r.sin2.visibility, 0.99);
  EXPECT_NEAR(r.sin2.fit.at("phase"), kPi / 2.0, 0.02);
  EXPECT_FALSE(r.saturation_warning);
  EXPECT_EQ(r.spectrum_fits.size(), 8u);
}

TEST(StandingWave, strong_drive_flags_saturation) {
  ExperimentSetup s;
  s.point_ion = true;
  const StandingWaveScan r = standing_wave_scan(s, 0.16, kTwoPi * 15.5e3, phase_grid(4));
  EXPECT_TRUE(r.saturation_warning);
  EXPECT_GT(r.max_probability, 0.5);
}

TEST(Precision, slope_and_extremum) {
  Sin2Fit f;
  f.fit.params = {{"amplitude", 0.4}, {"phase", 0.0}, {"offset", 0.0}};
  f.fit.param_errors = {{"amplitude", 0.0}, {"phase", 0.0}, {"offset", 0.0}};
  f.fit.converged = true;
  const double lambda = 729e-9;
  const double k = kTwoPi / lambda;
  // Largest slope of A sin^2 at phi = pi / 4.
  EXPECT_NEAR(positioning_precision(f, 0.03, kPi / 4.0, lambda), 0.03 / (0.4 * k), 1e-18);
  const double extremum = positioning_precision(f, 0.03, 0.0, lambda);
  EXPECT_NEAR(extremum, std::sqrt(0.03 / (0.4 * k * k)), 1e-18);
  EXPECT_GT(extremum, positioning_precision(f, 0.03, kPi / 4.0, lambda));
  EXPECT_EQ(positioning_precision(f, 0.0, 0.3, lambda), 0.0);
  f.fit.params["amplitude"] = 0.0;
  EXPECT_THROW(positioning_precision(f, 0.03, 0.3, lambda), ValidationError);
}

TEST(Piezo, calibration_round_trip) {
  const PiezoCalibration c{1.5, 0.8};
  for (double v : {-3.0, 0.0, 1.5, 10.0}) EXPECT_NEAR(c.volts(c.phase(v)), v, 1e-14);
  EXPECT_EQ(c.phase(1.5), 0.0);
}
