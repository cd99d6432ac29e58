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

#include "ioncav/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ioncav/constants.hpp"
#include "ioncav/error.hpp"

namespace ioncav::io {
namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw ValidationError(std::string(name), "column not found");
}

std::vector<double> CsvTable::numeric_column(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(parse_double(row.at(c), name));
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view context) {
  text = trim(text);
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double value = 0.0;
  const char* begin = text.data();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto res = std::from_chars(begin, text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ValidationError(std::string(context), "cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (const auto& [key, value] : table.meta) out << "# " << key << " = " << value << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

std::string to_csv_string(const CsvTable& table) {
  std::ostringstream s;
  write_csv(s, table);
  return s.str();
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(std::string_view(line).substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) {
        table.meta.emplace_back(std::string(body), "");
      } else {
        table.meta.emplace_back(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
      }
      continue;
    }
    auto cells = split(line, ',');
    if (!have_header) {
      table.columns = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw ValidationError("csv", "row has " + std::to_string(cells.size()) + " cells, header has " +
                                       std::to_string(table.columns.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw ValidationError("csv", "missing header row");
  return table;
}

CsvTable parse_csv(std::string_view text) {
  std::istringstream s{std::string(text)};
  return read_csv(s);
}

CsvTable field_table(const field::FieldTrajectory& traj, Meta meta) {
  CsvTable t;
  t.meta = std::move(meta);
  t.columns = {"time_s", "re_E", "im_E", "abs2_E"};
  t.rows.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto e = traj.amplitudes[i];
    t.rows.push_back({format_double(traj.times[i]), format_double(e.real()), format_double(e.imag()),
                      format_double(std::norm(e))});
  }
  return t;
}

CsvTable bloch_table(const std::vector<bloch::BlochSample>& samples, Meta meta) {
  CsvTable t;
  t.meta = std::move(meta);
  t.columns = {"time_s", "rho_ee", "re_rho_eg", "im_rho_eg"};
  for (const auto& s : samples) {
    t.rows.push_back({format_double(s.time), format_double(s.state.rho_ee), format_double(s.state.coherence.real()),
                      format_double(s.state.coherence.imag())});
  }
  return t;
}

CsvTable spectrum_table(const experiment::Spectrum& spectrum) {
  CsvTable t;
  t.meta = spectrum.meta;
  t.columns = {"detuning_hz", "probability", "shelved", "total"};
  for (std::size_t i = 0; i < spectrum.detunings.size(); ++i) {
    std::string shelved, total;
    if (spectrum.counts) {
      shelved = std::to_string((*spectrum.counts)[i].first);
      total = std::to_string((*spectrum.counts)[i].second);
    }
    t.rows.push_back({format_double(spectrum.detunings[i] / kTwoPi), format_double(spectrum.probabilities[i]),
                      std::move(shelved), std::move(total)});
  }
  return t;
}

experiment::Spectrum spectrum_from_table(const CsvTable& table) {
  experiment::Spectrum s;
  s.meta = table.meta;
  for (double hz : table.numeric_column("detuning_hz")) s.detunings.push_back(hz * kTwoPi);
  s.probabilities = table.numeric_column("probability");
  const std::size_t cs = table.column("shelved");
  const std::size_t ct = table.column("total");
  if (!table.rows.empty() && !table.rows.front()[cs].empty()) {
    std::vector<std::pair<int, int>> counts;
    for (const auto& row : table.rows) {
      counts.emplace_back(static_cast<int>(parse_double(row[cs], "shelved")),
                          static_cast<int>(parse_double(row[ct], "total")));
    }
    s.counts = std::move(counts);
  }
  return s;
}

CsvTable scan_table(const experiment::PositionScan& scan, Meta meta) {
  CsvTable t;
  t.meta = std::move(meta);
  t.columns = {"phi_rad", "value", "value_error"};
  for (std::size_t i = 0; i < scan.phases.size(); ++i) {
    t.rows.push_back({format_double(scan.phases[i]), format_double(scan.values[i]),
                      format_double(scan.value_errors[i])});
  }
  return t;
}

experiment::PositionScan scan_from_table(const CsvTable& table) {
  experiment::PositionScan scan;
  scan.phases = table.numeric_column("phi_rad");
  scan.values = table.numeric_column("value");
  scan.value_errors = table.numeric_column("value_error");
  return scan;
}

std::string fit_report(std::string_view name, const experiment::FitResult& fit, const Meta& extra) {
  std::ostringstream s;
  const std::string prefix = std::string(name) + ".";
  s << prefix << "converged=" << (fit.converged ? "true" : "false") << '\n';
  s << prefix << "residual_rms=" << format_double(fit.residual_rms) << '\n';
  for (const auto& [key, value] : fit.params) {
    s << prefix << key << '=' << format_double(value) << '\n';
    s << prefix << key << "_error=" << format_double(fit.param_errors.at(key)) << '\n';
  }
  for (const auto& [key, value] : extra) s << prefix << key << '=' << value << '\n';
  return s.str();
}

Meta parse_report(std::string_view text) {
  Meta out;
  std::istringstream s{std::string(text)};
  std::string line;
  while (std::getline(s, line)) {
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ValidationError("report", "line without '=': " + std::string(body));
    out.emplace_back(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
  }
  return out;
}

}  // namespace ioncav::io
