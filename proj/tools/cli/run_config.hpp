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
#include <string>
#include <string_view>

#include "ioncav/csv.hpp"
#include "ioncav/experiment.hpp"

// Run configuration as read from a flat "section.key = value" file. Values
// are stored in ordinary units (Hz, m, amu); conversion to angular rates
// happens only in to_setup().
namespace ioncav::cli {

struct RunConfig {
  struct Cavity {
    double finesse = 35000.0;
    double length = 21e-3;
    double waist = 54e-6;
    double mirror_curvature = 25e-3;
    double wavelength = 729e-9;
    bool operator==(const Cavity&) const = default;
  } cavity;

  struct Transition {
    double wavelength = 729e-9;
    double natural_linewidth_hz = 0.17;
    double laser_linewidth_hz = 6e3;
    double coupling_g_hz = 134.0;
    bool operator==(const Transition&) const = default;
  } transition;

  struct Trap {
    double freq_x_hz = 2.9e6;
    double freq_y_hz = 3.9e6;
    double freq_z_hz = 7.4e6;
    double nbar_x = 22.9;
    double nbar_y = 4.3;
    double nbar_z = 4.9;
    double ion_mass_amu = 40.0;
    double cos_x = 0.5;
    double cos_y = 0.5;
    double cos_z = 0.70710678118654752;
    bool operator==(const Trap&) const = default;
  } trap;

  struct Motion {
    double tail_epsilon = 1e-4;
    bool point_ion = false;
    bool position_averaging = true;
    bool operator==(const Motion&) const = default;
  } motion;

  struct Sweep {
    double nu_l = 0.16;
    double window_halfwidth = 20.0;
    int samples_per_tau = 20;
    bool operator==(const Sweep&) const = default;
  } sweep;

  struct Sampling {
    bool enabled = false;
    int n_repeats = 100;
    double fidelity = 0.99;
    std::uint64_t seed = 1;
    bool operator==(const Sampling&) const = default;
  } sampling;

  std::string output_dir = ".";

  bool operator==(const RunConfig&) const = default;
};

// Parses and validates. Missing keys keep their defaults. Unknown or
// duplicate keys, malformed numbers and violated invariants throw
// ValidationError naming the key and line.
RunConfig parse_config(std::string_view text);

// Every key with its effective value, in file order; parse_config of the
// rendered lines reproduces the configuration exactly.
io::Meta effective_config(const RunConfig& cfg);
std::string format_config(const RunConfig& cfg);

experiment::ExperimentSetup to_setup(const RunConfig& cfg);
experiment::SamplingSpec to_sampling(const RunConfig& cfg);

}  // namespace ioncav::cli
