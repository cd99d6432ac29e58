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

#include "ioncav/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ioncav/error.hpp"
#include "ioncav/numeric.hpp"

namespace ioncav::bloch {
namespace {

constexpr double kPositivityTol = 1e-9;
constexpr double kSkipRelativeWeight = 1e-12;

struct Derivative {
  double d_ee;
  std::complex<double> d_eg;
};

struct BlochRhs {
  double detuning;
  double gamma;
  double gamma_perp;

  Derivative operator()(std::complex<double> omega, double ee, std::complex<double> eg) const {
    return {-gamma * ee + std::imag(std::conj(omega) * eg),
            std::complex<double>(-gamma_perp, detuning) * eg +
                std::complex<double>(0.0, 0.5) * omega * (1.0 - 2.0 * ee)};
  }
};

void check_positivity(const BlochState& s, double t) {
  const double pop_bound = s.rho_ee * (1.0 - s.rho_ee) + kPositivityTol;
  if (s.rho_ee < -kPositivityTol || s.rho_ee > 1.0 + kPositivityTol || std::norm(s.coherence) > pop_bound) {
    std::ostringstream msg;
    msg << "density matrix lost positivity at t = " << t << " s (rho_ee = " << s.rho_ee
        << ", |rho_eg|^2 = " << std::norm(s.coherence) << "); integration step too large";
    throw NumericalError(msg.str());
  }
}

}  // namespace

void DriveSpec::validate() const {
  detail::require_non_negative(omega_peak, "omega_peak");
  detail::require_non_negative(motional_weight, "motional_weight");
  detail::require_non_negative(gamma_pop, "gamma_pop");
  detail::require_non_negative(gamma_laser, "gamma_laser");
  if (!std::isfinite(detuning)) throw ValidationError("detuning", "must be finite");
}

BlochResult integrate_bloch(const DriveSpec& drive, const field::FieldTrajectory& field,
                            bool record_trajectory) {
  drive.validate();
  const auto& times = field.times;
  const auto& amps = field.amplitudes;
  if (times.size() < 3 || times.size() != amps.size() || times.size() % 2 == 0) {
    throw ValidationError("field", "needs an odd number (>= 3) of samples");
  }

  const BlochRhs rhs{drive.detuning, drive.gamma_pop, 0.5 * drive.gamma_pop + drive.gamma_laser};
  const double scale = drive.omega_peak * std::sqrt(drive.motional_weight);

  BlochResult result;
  BlochState s;
  if (record_trajectory) {
    result.trajectory.reserve(times.size() / 2 + 1);
    result.trajectory.push_back({times.front(), s});
  }
  if (scale == 0.0) {  // the ground state is stationary without drive
    if (record_trajectory) {
      for (std::size_t i = 2; i < times.size(); i += 2) result.trajectory.push_back({times[i], s});
    }
    result.final_state = s;
    return result;
  }

  for (std::size_t i = 0; i + 2 < times.size(); i += 2) {
    const double h = times[i + 2] - times[i];
    const auto o1 = scale * amps[i];
    const auto o2 = scale * amps[i + 1];
    const auto o3 = scale * amps[i + 2];
    const Derivative k1 = rhs(o1, s.rho_ee, s.coherence);
    const Derivative k2 = rhs(o2, s.rho_ee + 0.5 * h * k1.d_ee, s.coherence + (0.5 * h) * k1.d_eg);
    const Derivative k3 = rhs(o2, s.rho_ee + 0.5 * h * k2.d_ee, s.coherence + (0.5 * h) * k2.d_eg);
    const Derivative k4 = rhs(o3, s.rho_ee + h * k3.d_ee, s.coherence + h * k3.d_eg);
    s.rho_ee += h / 6.0 * (k1.d_ee + 2.0 * k2.d_ee + 2.0 * k3.d_ee + k4.d_ee);
    s.coherence += (h / 6.0) * (k1.d_eg + 2.0 * k2.d_eg + 2.0 * k3.d_eg + k4.d_eg);
    check_positivity(s, times[i + 2]);
    if (record_trajectory) result.trajectory.push_back({times[i + 2], s});
  }
  result.final_state = s;
  return result;
}

double excitation_probability(const DriveSpec& drive, const field::FieldTrajectory& field,
                              const motion::ThermalDistribution& dist,
                              motion::Transition transition, const motion::MotionalMode& mode,
                              double phi, double position_contrast) {
  const int dn = motion::phonon_change(transition);
  const std::size_t channels = dist.probabilities.size();
  std::vector<double> weights(channels);
  double largest = 0.0;
  for (std::size_t n = 0; n < channels; ++n) {
    weights[n] = motion::channel_weight(transition, static_cast<int>(n), mode.eta, phi, position_contrast);
    largest = std::max(largest, dist.probabilities[n] * weights[n]);
  }
  if (largest == 0.0) return 0.0;

  CompensatedSum total;
  DriveSpec channel = drive;
  channel.detuning = drive.detuning - dn * mode.omega;
  for (std::size_t n = 0; n < channels; ++n) {
    const double p = dist.probabilities[n];
    if (p * weights[n] < kSkipRelativeWeight * largest) continue;
    channel.motional_weight = weights[n];
    total += p * integrate_bloch(channel, field).final_state.rho_ee;
  }
  return std::clamp(total.value(), 0.0, 1.0);
}

}  // namespace ioncav::bloch
