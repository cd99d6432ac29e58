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

#include <map>
#include <span>
#include <string>

namespace ioncav::experiment {

struct FitResult {
  std::map<std::string, double> params;
  std::map<std::string, double> param_errors;
  double residual_rms = 0.0;
  bool converged = false;

  double at(const std::string& name) const { return params.at(name); }
  double error(const std::string& name) const { return param_errors.at(name); }
};

double lorentzian(double x, double center, double hwhm, double peak, double offset);

// offset + amplitude * sin^2(phi + phase)
double sin2_model(double phi, double amplitude, double phase, double offset);

// Levenberg-Marquardt fit of offset + peak hwhm^2 / ((x - center)^2 + hwhm^2),
// seeded from the data (argmax, half-maximum crossings). Parameters are
// center, hwhm, peak, offset. Degenerate input yields converged = false,
// never an exception, except for fewer than 8 points or a zero x span.
FitResult fit_lorentzian(std::span<const double> x, std::span<const double> y);

struct Sin2Fit {
  FitResult fit;  // amplitude >= 0, phase in [0, pi), offset
  double visibility = 0.0;  // amplitude / (amplitude + 2 offset)
  double visibility_error = 0.0;
};

// Linear least squares in (1, cos 2 phi, sin 2 phi), then exact recovery of
// amplitude and phase.
Sin2Fit fit_sin2(std::span<const double> phi, std::span<const double> y);

}  // namespace ioncav::experiment
