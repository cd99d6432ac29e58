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

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ioncav/bloch.hpp"
#include "ioncav/cavity_field.hpp"
#include "ioncav/experiment.hpp"
#include "ioncav/fitting.hpp"

// Plot-ready CSV files. Every file opens with '#' comment lines holding the
// run configuration as "key = value", followed by a header row. Numbers use
// the shortest representation that parses back to the same double.
namespace ioncav::io {

using Meta = std::vector<std::pair<std::string, std::string>>;

struct CsvTable {
  Meta meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws if absent
  std::vector<double> numeric_column(std::string_view name) const;

  bool operator==(const CsvTable&) const = default;
};

std::string format_double(double value);
double parse_double(std::string_view text, std::string_view context);

void write_csv(std::ostream& out, const CsvTable& table);
std::string to_csv_string(const CsvTable& table);
CsvTable read_csv(std::istream& in);
CsvTable parse_csv(std::string_view text);

// time_s, re_E, im_E, abs2_E
CsvTable field_table(const field::FieldTrajectory& traj, Meta meta = {});
// time_s, rho_ee, re_rho_eg, im_rho_eg
CsvTable bloch_table(const std::vector<bloch::BlochSample>& samples, Meta meta = {});

// detuning_hz, probability, shelved, total (count cells empty without sampling)
CsvTable spectrum_table(const experiment::Spectrum& spectrum);
experiment::Spectrum spectrum_from_table(const CsvTable& table);

// phi_rad, value, value_error
CsvTable scan_table(const experiment::PositionScan& scan, Meta meta = {});
experiment::PositionScan scan_from_table(const CsvTable& table);

// Flat "key=value" block, one entry per line, prefixed with `name.`.
std::string fit_report(std::string_view name, const experiment::FitResult& fit, const Meta& extra = {});
Meta parse_report(std::string_view text);

}  // namespace ioncav::io
