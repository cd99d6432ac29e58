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

#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cli/run_config.hpp"
#include "ioncav/constants.hpp"
#include "ioncav/csv.hpp"
#include "ioncav/error.hpp"

namespace ioncav::cli {
namespace {

namespace fs = std::filesystem;
using experiment::Transition;

struct GlobalOptions {
  std::string config_path;
  std::string output_dir;
};

struct SpectrumOptions {
  double nu_l = 0.0;
  bool nu_l_set = false;
  double omega_max_khz = 15.5;
  double phi = 0.0;
  double grid_span_khz = 60.0;
  int points = 121;
  bool sample = false;
  std::string transition = "carrier";
  std::string output = "spectrum.csv";
};

struct ScanOptions {
  double nu_l = 0.16;
  int phi_points = 16;
  double omega_max_khz = 3.0;
  double sideband_omega_khz = 0.0;
  std::string output;
};

struct FitOptions {
  std::string input;
  std::string model = "lorentzian";
  std::string x_column;
  std::string y_column;
};

struct Context {
  RunConfig config;
  fs::path output_dir;
  std::ostream& out;
  std::ostream& err;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config", "cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Context load(const GlobalOptions& opts, std::ostream& out, std::ostream& err) {
  RunConfig cfg = opts.config_path.empty() ? parse_config("") : parse_config(read_file(opts.config_path));
  if (const char* env = std::getenv("IONCAV_OUTPUT_DIR"); env != nullptr && *env != '\0') cfg.output_dir = env;
  if (!opts.output_dir.empty()) cfg.output_dir = opts.output_dir;
  return Context{cfg, fs::path(cfg.output_dir), out, err};
}

fs::path write_output(const Context& ctx, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(ctx.output_dir, ec);
  const fs::path path = ctx.output_dir / name;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("output_dir", "cannot write '" + path.string() + "'");
  file << content;
  return path;
}

io::Meta run_meta(const Context& ctx, const std::string& command, io::Meta flags) {
  io::Meta meta{{"command", command}};
  for (auto& kv : flags) meta.push_back(std::move(kv));
  for (auto& kv : effective_config(ctx.config)) {
    if (kv.first != "output_dir") meta.push_back(std::move(kv));
  }
  return meta;
}

Transition parse_transition(const std::string& name) {
  if (name == "carrier") return Transition::kCarrier;
  if (name == "red" || name == "red_sideband") return Transition::kRedSideband;
  if (name == "blue" || name == "blue_sideband") return Transition::kBlueSideband;
  throw ValidationError("--transition", "expected carrier, red or blue");
}

std::string fmt(double v) { return io::format_double(v); }

void echo_config(const Context& ctx) {
  for (const auto& [key, value] : effective_config(ctx.config)) ctx.out << "# " << key << " = " << value << "\n";
}

int cmd_derive(const Context& ctx) {
  const experiment::ExperimentSetup setup = to_setup(ctx.config);
  const params::CavityFigures fig = params::derive_cavity_figures(setup.cavity);
  const params::CooperativityFigures coop =
      params::cooperativity_block(setup.transition.coupling_g, fig.kappa_hwhm, setup.transition.gamma());
  const double extension = params::wavepacket_extension(setup.trap);
  const double contrast = params::contrast_factor(extension, setup.transition.wavelength);

  struct Row {
    std::string name;
    double value;
    std::string unit;
  };
  std::vector<Row> rows = {
      {"fsr", fig.fsr, "Hz"},
      {"linewidth_fwhm", fig.linewidth_fwhm, "Hz"},
      {"kappa_over_2pi", fig.kappa_hwhm / kTwoPi, "Hz"},
      {"kappa", fig.kappa_hwhm, "rad/s"},
      {"storage_time", fig.storage_time, "s"},
      {"scan_velocity_per_nu_l", params::scan_velocity(1.0, setup.cavity), "m/s"},
      {"cooperativity", coop.cooperativity, ""},
      {"purcell", coop.purcell, ""},
      {"beta", coop.beta, ""},
      {"wavepacket_extension", extension, "m"},
      {"contrast_factor", contrast, ""},
  };
  static constexpr const char* kAxis[] = {"x", "y", "z"};
  for (int axis = 0; axis < 3; ++axis) {
    rows.push_back({std::string("eta_") + kAxis[axis],
                    motion::make_mode(setup.trap, axis, setup.transition.wavelength).eta, ""});
  }

  io::CsvTable table;
  table.meta = run_meta(ctx, "derive", {});
  table.columns = {"quantity", "value", "unit"};
  for (const auto& r : rows) table.rows.push_back({r.name, fmt(r.value), r.unit});
  const fs::path path = write_output(ctx, "derive.csv", io::to_csv_string(table));

  std::ostream& out = ctx.out;
  out << "storage time tau_s    = " << fig.storage_time * 1e9 << " ns\n";
  out << "cavity decay kappa    = 2pi x " << fig.kappa_hwhm / kTwoPi / 1e3 << " kHz\n";
  out << "free spectral range   = " << fig.fsr / 1e9 << " GHz\n";
  out << std::fixed << std::setprecision(2);
  out << "cooperativity C       = " << coop.cooperativity << "\n";
  out << "Purcell factor F      = " << coop.purcell << "\n";
  out << "cavity fraction beta  = " << coop.beta << "\n";
  out << std::setprecision(1);
  out << "wave packet a_c       = " << extension * 1e9 << " nm\n";
  out << std::setprecision(3);
  out << "contrast factor       = " << contrast << "\n";
  out << std::setprecision(4);
  for (int axis = 0; axis < 3; ++axis) out << "eta_" << kAxis[axis] << "                 = " << rows[11 + axis].value << "\n";
  out << std::defaultfloat << "wrote " << path.string() << "\n";
  return kSuccess;
}

int cmd_spectrum(const Context& ctx, const SpectrumOptions& opt) {
  const experiment::ExperimentSetup setup = to_setup(ctx.config);
  const double nu_l = opt.nu_l_set ? opt.nu_l : ctx.config.sweep.nu_l;
  const Transition transition = parse_transition(opt.transition);
  experiment::DetuningGrid grid = experiment::default_grid(setup, nu_l, transition);
  grid.half_span = kTwoPi * opt.grid_span_khz * 1e3;
  grid.points = opt.points;
  experiment::SamplingSpec sampling = to_sampling(ctx.config);
  sampling.enabled = sampling.enabled || opt.sample;
  detail::require_non_negative(opt.omega_max_khz, "--omega-max-khz");

  experiment::Spectrum spec = experiment::simulate_spectrum(setup, nu_l, kTwoPi * opt.omega_max_khz * 1e3,
                                                            opt.phi, transition, grid, sampling);
  spec.meta = run_meta(ctx, "spectrum",
                       {{"nu_l", fmt(nu_l)},
                        {"omega_max_khz", fmt(opt.omega_max_khz)},
                        {"phi", fmt(opt.phi)},
                        {"transition", motion::to_string(transition)},
                        {"grid_span_khz", fmt(opt.grid_span_khz)},
                        {"points", std::to_string(opt.points)},
                        {"sampling", sampling.enabled ? "true" : "false"}});
  const fs::path path = write_output(ctx, opt.output, io::to_csv_string(io::spectrum_table(spec)));

  const std::vector<double> y = spec.observed();
  const double peak = *std::max_element(y.begin(), y.end());
  std::vector<double> hz(spec.detunings.size());
  for (std::size_t i = 0; i < hz.size(); ++i) hz[i] = spec.detunings[i] / kTwoPi;
  const experiment::FitResult fit = experiment::fit_lorentzian(hz, y);
  ctx.out << io::fit_report("lorentzian", fit,
                            {{"peak_probability", fmt(peak)}, {"integral_excitation", fmt(experiment::integral_excitation(spec))}});
  ctx.out << "wrote " << path.string() << "\n";
  return kSuccess;
}

int cmd_swscan(const Context& ctx, const ScanOptions& opt) {
  const experiment::ExperimentSetup setup = to_setup(ctx.config);
  const auto phases = experiment::phase_grid(opt.phi_points);
  const experiment::StandingWaveScan result =
      experiment::standing_wave_scan(setup, opt.nu_l, kTwoPi * opt.omega_max_khz * 1e3, phases);
  if (result.saturation_warning) {
    ctx.err << "warning: peak excitation " << result.max_probability
            << " exceeds 0.2; the fringe is no longer a pure intensity map\n";
  }
  const io::Meta meta = run_meta(ctx, "swscan",
                                 {{"nu_l", fmt(opt.nu_l)},
                                  {"omega_max_khz", fmt(opt.omega_max_khz)},
                                  {"phi_points", std::to_string(opt.phi_points)}});
  const std::string name = opt.output.empty() ? "swscan.csv" : opt.output;
  const fs::path path = write_output(ctx, name, io::to_csv_string(io::scan_table(result.scan, meta)));
  const std::string report =
      io::fit_report("sin2", result.sin2.fit,
                     {{"visibility", fmt(result.sin2.visibility)},
                      {"visibility_error", fmt(result.sin2.visibility_error)},
                      {"max_probability", fmt(result.max_probability)}});
  write_output(ctx, fs::path(name).replace_extension("").string() + "_fit.txt", report);
  ctx.out << report << "wrote " << path.string() << "\n";
  return kSuccess;
}

int cmd_sideband(const Context& ctx, const ScanOptions& opt) {
  const experiment::ExperimentSetup setup = to_setup(ctx.config);
  const auto phases = experiment::phase_grid(opt.phi_points);
  const experiment::CarrierSidebandScan result =
      experiment::carrier_sideband_scan(setup, opt.nu_l, phases, kTwoPi * opt.omega_max_khz * 1e3,
                                        kTwoPi * opt.sideband_omega_khz * 1e3);
  io::Meta flags{{"nu_l", fmt(opt.nu_l)},
                 {"omega_carrier_khz", fmt(result.omega_carrier / kTwoPi / 1e3)},
                 {"omega_sideband_khz", fmt(result.omega_sideband / kTwoPi / 1e3)},
                 {"phi_points", std::to_string(opt.phi_points)}};
  const io::Meta meta = run_meta(ctx, "sideband", flags);
  const std::string stem = opt.output.empty() ? "sideband" : fs::path(opt.output).replace_extension("").string();
  const fs::path carrier_path =
      write_output(ctx, stem + "_carrier.csv", io::to_csv_string(io::scan_table(result.carrier, meta)));
  const fs::path sideband_path =
      write_output(ctx, stem + "_red.csv", io::to_csv_string(io::scan_table(result.sideband, meta)));
  std::string report =
      io::fit_report("carrier", result.carrier_fit.fit, {{"visibility", fmt(result.carrier_fit.visibility)}});
  report += io::fit_report("red_sideband", result.sideband_fit.fit,
                           {{"visibility", fmt(result.sideband_fit.visibility)}});
  report += "phase_difference_rad=" + fmt(result.phase_difference) + "\n";
  write_output(ctx, stem + "_fit.txt", report);
  ctx.out << report << "wrote " << carrier_path.string() << "\nwrote " << sideband_path.string() << "\n";
  return kSuccess;
}

int cmd_fit(const Context& ctx, const FitOptions& opt) {
  const io::CsvTable table = io::parse_csv(read_file(opt.input));
  const bool sin2 = opt.model == "sin2";
  if (!sin2 && opt.model != "lorentzian") throw ValidationError("--model", "expected lorentzian or sin2");
  const bool is_scan = std::find(table.columns.begin(), table.columns.end(), "phi_rad") != table.columns.end();
  const std::string x_col = !opt.x_column.empty() ? opt.x_column : (is_scan ? "phi_rad" : "detuning_hz");
  const std::string y_col = !opt.y_column.empty() ? opt.y_column : (is_scan ? "value" : "probability");
  const std::vector<double> x = table.numeric_column(x_col);
  const std::vector<double> y = table.numeric_column(y_col);
  if (sin2) {
    const experiment::Sin2Fit fit = experiment::fit_sin2(x, y);
    ctx.out << io::fit_report("sin2", fit.fit,
                              {{"visibility", fmt(fit.visibility)}, {"visibility_error", fmt(fit.visibility_error)}});
  } else {
    const experiment::FitResult fit = experiment::fit_lorentzian(x, y);
    ctx.out << io::fit_report("lorentzian", fit);
    if (!fit.converged) {
      ctx.err << "error: Lorentzian fit did not converge\n";
      return kNumericalFailure;
    }
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trapped-ion / swept-cavity coupling simulator", "ioncav"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions global;
  app.add_option("-c,--config", global.config_path, "Flat key = value configuration file");
  app.add_option("-o,--output-dir", global.output_dir, "Directory for CSV and report files");

  app.add_subcommand("derive", "Print derived cavity, cooperativity and motional figures");

  SpectrumOptions spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Excitation spectrum at one scan rate");
  spectrum_cmd->add_option_function<double>("--nu-l", [&](double v) { spectrum.nu_l = v; spectrum.nu_l_set = true; },
                                            "Normalized scan rate (default: sweep.nu_l)");
  spectrum_cmd->add_option("--omega-max-khz", spectrum.omega_max_khz, "Peak Rabi frequency / 2pi in kHz");
  spectrum_cmd->add_option("--phi", spectrum.phi, "Standing-wave phase in rad (0 = carrier maximum)");
  spectrum_cmd->add_option("--grid-span-khz", spectrum.grid_span_khz, "Half span of the detuning grid in kHz");
  spectrum_cmd->add_option("--points", spectrum.points, "Number of detuning points");
  spectrum_cmd->add_flag("--sample", spectrum.sample, "Add shelving-detection counts");
  spectrum_cmd->add_option("--transition", spectrum.transition, "carrier | red | blue");
  spectrum_cmd->add_option("--output", spectrum.output, "Output file name");

  ScanOptions swscan;
  auto* swscan_cmd = app.add_subcommand("swscan", "Standing-wave position scan with sin^2 fit");
  swscan_cmd->add_option("--nu-l", swscan.nu_l, "Normalized scan rate");
  swscan_cmd->add_option("--phi-points", swscan.phi_points, "Phases across one intensity period");
  swscan_cmd->add_option("--omega-max-khz", swscan.omega_max_khz, "Peak Rabi frequency / 2pi in kHz");
  swscan_cmd->add_option("--output", swscan.output, "Output file name");

  ScanOptions sideband;
  sideband.nu_l = -0.23;
  sideband.omega_max_khz = 4.0;
  auto* sideband_cmd = app.add_subcommand("sideband", "Carrier and red-sideband integral excitation scans");
  sideband_cmd->add_option("--nu-l", sideband.nu_l, "Normalized scan rate");
  sideband_cmd->add_option("--phi-points", sideband.phi_points, "Phases across one intensity period");
  sideband_cmd->add_option("--omega-max-khz", sideband.omega_max_khz, "Carrier Rabi frequency / 2pi in kHz");
  sideband_cmd->add_option("--sideband-omega-khz", sideband.sideband_omega_khz,
                           "Sideband Rabi frequency / 2pi in kHz (0 = balance against the carrier)");
  sideband_cmd->add_option("--output", sideband.output, "Output file stem");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a Lorentzian or sin^2 to a CSV produced by this tool");
  fit_cmd->add_option("input", fit.input, "CSV file")->required();
  fit_cmd->add_option("--model", fit.model, "lorentzian | sin2");
  fit_cmd->add_option("--x", fit.x_column, "x column");
  fit_cmd->add_option("--y", fit.y_column, "y column");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }

  try {
    const Context ctx = load(global, out, err);
    if (!app.got_subcommand(fit_cmd)) echo_config(ctx);
    if (app.got_subcommand("derive")) return cmd_derive(ctx);
    if (app.got_subcommand(spectrum_cmd)) return cmd_spectrum(ctx, spectrum);
    if (app.got_subcommand(swscan_cmd)) return cmd_swscan(ctx, swscan);
    if (app.got_subcommand(sideband_cmd)) return cmd_sideband(ctx, sideband);
    if (app.got_subcommand(fit_cmd)) return cmd_fit(ctx, fit);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kValidationFailure;
}

}  // namespace ioncav::cli
