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

#include <gtest/gtest.h>

#include <cmath>

#include "ioncav/constants.hpp"
#include "ioncav/error.hpp"

using namespace ioncav;
using namespace ioncav::params;

namespace {

// Frozen from an independent evaluation of the closed forms (CODATA c, hbar, amu).
constexpr double kFsr = 7137915666.666666;
constexpr double kFwhm = 203940.4476190476;
constexpr double kKappa = 640697.812009814;
constexpr double kStorage = 7.803991064547933e-07;
constexpr double kLengthRateAt016 = 1.0675856113260672e-06;
constexpr double kSlopeAt016 = 131357979620.53215;
constexpr double kExtension = 2.6070747266811945e-08;
constexpr double kZeroPointExtension = 5.246676961896344e-09;

}  // namespace

TEST(CavityFigures, default_cavity) {
  const CavityFigures f = derive_cavity_figures(CavityConfig{});
  EXPECT_NEAR(f.fsr / kFsr, 1.0, 1e-13);
  EXPECT_NEAR(f.linewidth_fwhm / kFwhm, 1.0, 1e-13);
  EXPECT_NEAR(f.kappa_hwhm / kKappa, 1.0, 1e-13);
  EXPECT_NEAR(f.storage_time / kStorage, 1.0, 1e-13);
  EXPECT_NEAR(f.kappa_hwhm / (kTwoPi * 102e3), 1.0, 0.01);
  EXPECT_NEAR(f.fsr, 7.138e9, 1e6);
}

TEST(CavityFigures, storage_time_is_half_inverse_kappa) {
  for (double finesse : {100.0, 3500.0, 35000.0, 1e6}) {
    for (double length : {1e-3, 21e-3, 0.2}) {
      CavityConfig cfg;
      cfg.finesse = finesse;
      cfg.length = length;
      cfg.mirror_curvature = length;
      const CavityFigures f = derive_cavity_figures(cfg);
      EXPECT_NEAR(f.kappa_hwhm * f.storage_time, 0.5, 1e-14);
      EXPECT_NEAR(f.linewidth_fwhm * finesse / f.fsr, 1.0, 1e-14);
    }
  }
}

TEST(CavityFigures, validation_names_field) {
  CavityConfig cfg;
  cfg.finesse = -1.0;
  try {
    cfg.validate();
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "cavity.finesse");
  }
  cfg = CavityConfig{};
  cfg.length = 0.0;
  EXPECT_THROW(derive_cavity_figures(cfg), ValidationError);
  cfg = CavityConfig{};
  cfg.length = 60e-3;  // beyond the concentric limit 2 R
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(ScanRate, reference_value) {
  const CavityConfig cfg;
  EXPECT_NEAR(scan_velocity(0.16, cfg) / kLengthRateAt016, 1.0, 1e-12);
  EXPECT_NEAR(detuning_slope(0.16, cfg) / kSlopeAt016, 1.0, 1e-12);
  EXPECT_EQ(normalized_scan_rate(0.0, cfg), 0.0);
  EXPECT_LT(normalized_scan_rate(-kLengthRateAt016, cfg), 0.0);
}

TEST(ScanRate, inversion_over_log_spaced_velocities) {
  const CavityConfig cfg;
  for (int i = 0; i < 100; ++i) {
    const double v = std::pow(10.0, -9.0 + 6.0 * i / 99.0);
    for (double sign : {1.0, -1.0}) {
      const double nu = normalized_scan_rate(sign * v, cfg);
      EXPECT_NEAR(scan_velocity(nu, cfg) / (sign * v), 1.0, 1e-12) << v;
    }
  }
}

TEST(ScanRate, slope_shifts_one_hwhm_per_storage_time) {
  const CavityConfig cfg;
  const CavityFigures f = derive_cavity_figures(cfg);
  for (double nu : {-0.46, -0.16, 0.01, 0.23, 2.0}) {
    EXPECT_NEAR(detuning_slope(nu, cfg) * f.storage_time / f.kappa_hwhm, nu, 1e-14);
  }
}

TEST(Cooperativity, reference_block) {
  const CooperativityFigures c = cooperativity_block(kTwoPi * 134.0, kTwoPi * 102e3, kTwoPi * 0.17);
  EXPECT_NEAR(c.cooperativity, 0.5177623990772778, 1e-12);
  EXPECT_NEAR(c.cooperativity, 0.52, 0.005);
  EXPECT_NEAR(c.purcell, 2.04, 0.01);
  EXPECT_NEAR(c.beta, 0.51, 0.005);
}

TEST(Cooperativity, identities_hold_exactly) {
  for (double g : {0.0, 1.0, 134.0, 1e4, 1e7}) {
    for (double kappa : {1e3, 6.4e5}) {
      const CooperativityFigures c = cooperativity_block(g, kappa, 1.07);
      EXPECT_EQ(c.purcell, 2.0 * c.cooperativity + 1.0);
      EXPECT_EQ(c.beta, 2.0 * c.cooperativity / (2.0 * c.cooperativity + 1.0));
      EXPECT_GE(c.beta, 0.0);
      EXPECT_LT(c.beta, 1.0);
    }
  }
}

TEST(Cooperativity, zero_rates_rejected) {
  EXPECT_THROW(cooperativity_block(1.0, 0.0, 1.0), ValidationError);
  EXPECT_THROW(cooperativity_block(1.0, 1.0, 0.0), ValidationError);
  EXPECT_THROW(cooperativity_block(-1.0, 1.0, 1.0), ValidationError);
}

TEST(Wavepacket, thermal_extension) {
  const TrapMotionConfig trap;
  const double a = wavepacket_extension(trap);
  EXPECT_NEAR(a / kExtension, 1.0, 1e-10);
  EXPECT_NEAR(a, 26e-9, 1e-9);
}

TEST(Wavepacket, zero_point_extension) {
  TrapMotionConfig trap;
  trap.mean_phonons = {0.0, 0.0, 0.0};
  EXPECT_NEAR(wavepacket_extension(trap) / kZeroPointExtension, 1.0, 1e-10);
}

TEST(Wavepacket, monotone_in_phonon_number) {
  TrapMotionConfig trap;
  double previous = 0.0;
  for (double n : {0.0, 0.5, 1.0, 4.9, 22.9, 100.0}) {
    trap.mean_phonons = {n, n, n};
    const double a = wavepacket_extension(trap);
    EXPECT_GT(a, previous);
    previous = a;
  }
}

TEST(Contrast, reference_values) {
  EXPECT_NEAR(contrast_factor(26e-9, 729e-9), 0.9510229628179938, 1e-13);
  EXPECT_NEAR(contrast_factor(52e-9, 729e-9), 0.8180201715958377, 1e-13);
  EXPECT_NEAR(contrast_factor(kExtension, 729e-9), 0.950762743378382, 1e-12);
  EXPECT_NEAR(contrast_factor(kExtension, 729e-9), 0.951, 0.002);
  EXPECT_EQ(contrast_factor(0.0, 729e-9), 1.0);
}

TEST(Contrast, bounded_and_decreasing) {
  double previous = 1.0;
  for (int i = 1; i <= 50; ++i) {
    const double c = contrast_factor(i * 5e-9, 729e-9);
    EXPECT_GT(c, 0.0);
    EXPECT_LT(c, previous);
    previous = c;
  }
  EXPECT_THROW(contrast_factor(-1e-9, 729e-9), ValidationError);
}

TEST(TrapMotion, validation) {
  TrapMotionConfig trap;
  trap.secular_frequencies[1] = 0.0;
  EXPECT_THROW(trap.validate(), ValidationError);
  trap = TrapMotionConfig{};
  trap.mean_phonons[2] = -0.1;
  EXPECT_THROW(trap.validate(), ValidationError);
}
