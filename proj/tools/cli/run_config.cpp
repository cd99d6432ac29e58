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

#include "cli/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <variant>
#include <vector>

#include "ioncav/constants.hpp"
#include "ioncav/error.hpp"

namespace ioncav::cli {
namespace {

enum class Unit { kNone, kFrequency, kLength };

struct Binding {
  const char* key;
  Unit unit;
  std::variant<double*, int*, bool*, std::uint64_t*, std::string*> target;
};

std::vector<Binding> bindings(RunConfig& c) {
  return {
      {"cavity.finesse", Unit::kNone, &c.cavity.finesse},
      {"cavity.length", Unit::kLength, &c.cavity.length},
      {"cavity.waist", Unit::kLength, &c.cavity.waist},
      {"cavity.mirror_curvature", Unit::kLength, &c.cavity.mirror_curvature},
      {"cavity.wavelength", Unit::kLength, &c.cavity.wavelength},
      {"transition.wavelength", Unit::kLength, &c.transition.wavelength},
      {"transition.natural_linewidth", Unit::kFrequency, &c.transition.natural_linewidth_hz},
      {"transition.laser_linewidth", Unit::kFrequency, &c.transition.laser_linewidth_hz},
      {"transition.coupling_g", Unit::kFrequency, &c.transition.coupling_g_hz},
      {"trap.freq_x", Unit::kFrequency, &c.trap.freq_x_hz},
      {"trap.freq_y", Unit::kFrequency, &c.trap.freq_y_hz},
      {"trap.freq_z", Unit::kFrequency, &c.trap.freq_z_hz},
      {"trap.nbar_x", Unit::kNone, &c.trap.nbar_x},
      {"trap.nbar_y", Unit::kNone, &c.trap.nbar_y},
      {"trap.nbar_z", Unit::kNone, &c.trap.nbar_z},
      {"trap.ion_mass_amu", Unit::kNone, &c.trap.ion_mass_amu},
      {"trap.cos_x", Unit::kNone, &c.trap.cos_x},
      {"trap.cos_y", Unit::kNone, &c.trap.cos_y},
      {"trap.cos_z", Unit::kNone, &c.trap.cos_z},
      {"motion.tail_epsilon", Unit::kNone, &c.motion.tail_epsilon},
      {"motion.point_ion", Unit::kNone, &c.motion.point_ion},
      {"motion.position_averaging", Unit::kNone, &c.motion.position_averaging},
      {"sweep.nu_l", Unit::kNone, &c.sweep.nu_l},
      {"sweep.window_halfwidth", Unit::kNone, &c.sweep.window_halfwidth},
      {"sweep.samples_per_tau", Unit::kNone, &c.sweep.samples_per_tau},
      {"sampling.enabled", Unit::kNone, &c.sampling.enabled},
      {"sampling.n_repeats", Unit::kNone, &c.sampling.n_repeats},
      {"sampling.fidelity", Unit::kNone, &c.sampling.fidelity},
      {"sampling.seed", Unit::kNone, &c.sampling.seed},
      {"output_dir", Unit::kNone, &c.output_dir},
  };
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

[[noreturn]] void fail(const std::string& key, int line, const std::string& what) {
  throw ValidationError(key, "line " + std::to_string(line) + ": " + what);
}

double scale_for_suffix(const std::string& suffix, Unit unit, const std::string& key, int line) {
  static const std::map<std::string, double> kFrequency = {
      {"hz", 1.0}, {"khz", 1e3}, {"mhz", 1e6}, {"ghz", 1e9}};
  static const std::map<std::string, double> kLength = {
      {"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
  if (suffix.empty()) return 1.0;
  const auto& table = unit == Unit::kFrequency ? kFrequency : kLength;
  if (unit != Unit::kNone) {
    if (const auto it = table.find(lower(suffix)); it != table.end()) return it->second;
  }
  fail(key, line, "unsupported unit suffix '" + suffix + "'");
}

double parse_quantity(const std::string& text, Unit unit, const std::string& key, int line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr == begin) fail(key, line, "cannot parse number '" + text + "'");
  const double scale = scale_for_suffix(trim(std::string_view(res.ptr, end - res.ptr)), unit, key, line);
  if (!std::isfinite(value)) fail(key, line, "value must be finite");
  return value * scale;
}

struct Assign {
  const std::string& text;
  Unit unit;
  const std::string& key;
  int line;

  void operator()(double* p) const { *p = parse_quantity(text, unit, key, line); }
  void operator()(int* p) const {
    const double v = parse_quantity(text, Unit::kNone, key, line);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(key, line, "expected an integer");
    *p = static_cast<int>(v);
  }
  void operator()(std::uint64_t* p) const {
    const auto res = std::from_chars(text.data(), text.data() + text.size(), *p);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      fail(key, line, "expected a non-negative integer");
    }
  }
  void operator()(bool* p) const {
    const std::string v = lower(text);
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
      *p = true;
    } else if (v == "false" || v == "0" || v == "no" || v == "off") {
      *p = false;
    } else {
      fail(key, line, "expected a boolean, got '" + text + "'");
    }
  }
  void operator()(std::string* p) const { *p = text; }
};

struct Render {
  std::string operator()(const double* p) const { return io::format_double(*p); }
  std::string operator()(const int* p) const { return std::to_string(*p); }
  std::string operator()(const std::uint64_t* p) const { return std::to_string(*p); }
  std::string operator()(const bool* p) const { return *p ? "true" : "false"; }
  std::string operator()(const std::string* p) const { return *p; }
};

void validate(const RunConfig& cfg) {
  if (!(cfg.motion.tail_epsilon > 0.0 && cfg.motion.tail_epsilon < 1.0)) {
    throw ValidationError("motion.tail_epsilon", "must lie in (0, 1)");
  }
  to_setup(cfg).validate();
  field::SweepSpec sweep{cfg.sweep.nu_l, cfg.sweep.window_halfwidth, cfg.sweep.samples_per_tau};
  sweep.validate();
  if (cfg.sampling.n_repeats <= 0) throw ValidationError("sampling.n_repeats", "must be positive");
  if (!(cfg.sampling.fidelity > 0.5 && cfg.sampling.fidelity <= 1.0)) {
    throw ValidationError("sampling.fidelity", "must lie in (0.5, 1]");
  }
  if (cfg.output_dir.empty()) throw ValidationError("output_dir", "must not be empty");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  const std::vector<Binding> table = bindings(cfg);
  std::map<std::string, int> seen;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(trim(line), line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto binding = std::find_if(table.begin(), table.end(), [&](const Binding& b) { return key == b.key; });
    if (binding == table.end()) fail(key, line_no, "unknown key");
    if (const auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
      fail(key, line_no, "duplicate key (first set on line " + std::to_string(it->second) + ")");
    }
    if (value.empty()) fail(key, line_no, "missing value");
    std::visit(Assign{value, binding->unit, key, line_no}, binding->target);
  }

  try {
    validate(cfg);
  } catch (const ValidationError& e) {
    const auto it = seen.find(e.field());
    const std::string where = it != seen.end() ? "line " + std::to_string(it->second) : "default value";
    throw ValidationError(e.field(), where + ": " + std::string(e.what()).substr(e.field().size() + 2));
  }
  return cfg;
}

io::Meta effective_config(const RunConfig& cfg) {
  RunConfig copy = cfg;
  io::Meta out;
  for (const auto& b : bindings(copy)) out.emplace_back(b.key, std::visit(Render{}, b.target));
  return out;
}

std::string format_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : effective_config(cfg)) out += key + " = " + value + "\n";
  return out;
}

experiment::ExperimentSetup to_setup(const RunConfig& cfg) {
  experiment::ExperimentSetup s;
  s.cavity = {cfg.cavity.finesse, cfg.cavity.length, cfg.cavity.waist, cfg.cavity.mirror_curvature,
              cfg.cavity.wavelength};
  s.transition.wavelength = cfg.transition.wavelength;
  s.transition.natural_linewidth_fwhm = cfg.transition.natural_linewidth_hz;
  s.transition.laser_linewidth_fwhm = cfg.transition.laser_linewidth_hz;
  s.transition.coupling_g = kTwoPi * cfg.transition.coupling_g_hz;
  s.trap.secular_frequencies = {kTwoPi * cfg.trap.freq_x_hz, kTwoPi * cfg.trap.freq_y_hz,
                                kTwoPi * cfg.trap.freq_z_hz};
  s.trap.mean_phonons = {cfg.trap.nbar_x, cfg.trap.nbar_y, cfg.trap.nbar_z};
  s.trap.ion_mass = cfg.trap.ion_mass_amu * PhysicalConstants::amu;
  s.trap.direction_cosines = {cfg.trap.cos_x, cfg.trap.cos_y, cfg.trap.cos_z};
  s.sweep = {cfg.sweep.nu_l, cfg.sweep.window_halfwidth, cfg.sweep.samples_per_tau};
  s.tail_epsilon = cfg.motion.tail_epsilon;
  s.point_ion = cfg.motion.point_ion;
  s.thermal_position_averaging = cfg.motion.position_averaging;
  return s;
}

experiment::SamplingSpec to_sampling(const RunConfig& cfg) {
  return {cfg.sampling.enabled, cfg.sampling.n_repeats, cfg.sampling.fidelity, cfg.sampling.seed};
}

}  // namespace ioncav::cli
