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

#include "ioncav/motion.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ioncav/constants.hpp"
#include "ioncav/error.hpp"
#include "ioncav/numeric.hpp"

namespace ioncav::motion {
namespace {

// cos and sin of phi, exact at integer multiples of pi/2.
std::pair<double, double> snapped_cos_sin(double phi) {
  const double quarter = phi / (0.5 * kPi);
  const double nearest = std::nearbyint(quarter);
  if (std::abs(quarter - nearest) <= 1e-13 * std::max(1.0, std::abs(quarter))) {
    switch (static_cast<int>(std::fmod(std::fmod(nearest, 4.0) + 4.0, 4.0))) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return {std::cos(phi), std::sin(phi)};
}

// cos(phi + quarter_turns * pi/2).
double shifted_cos(double phi, int quarter_turns) {
  const auto [c, s] = snapped_cos_sin(phi);
  switch (quarter_turns % 4) {
    case 0: return c;
    case 1: return -s;
    case 2: return -c;
    default: return s;
  }
}

// |<n'|exp(i eta X)|n>| without the i^|n-n'| phase.
double tw_magnitude(int n, int n_prime, double eta) {
  if (n < 0 || n_prime < 0) throw ValidationError("n", "phonon numbers must be non-negative");
  detail::require_non_negative(eta, "eta");
  if (eta == 0.0) return n == n_prime ? 1.0 : 0.0;

  const int d = std::abs(n - n_prime);
  const int lo = std::min(n, n_prime);
  const double x = eta * eta;

  // l_k = L_k^d(x) sqrt(k! d! / (k+d)!) obeys a bounded three-term recurrence.
  double log_scale = d * std::log(eta) - 0.5 * std::lgamma(d + 1.0) - 0.5 * x;
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < lo; ++k) {
    const double next = ((2.0 * k + 1.0 + d - x) * cur - std::sqrt(double(k) * (k + d)) * prev) /
                        std::sqrt((k + 1.0) * (k + 1.0 + d));
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      cur *= 1e-150;
      prev *= 1e-150;
      log_scale += 150.0 * std::log(10.0);
    }
  }
  return cur * std::exp(log_scale);
}

}  // namespace

int phonon_change(Transition t) {
  switch (t) {
    case Transition::kCarrier: return 0;
    case Transition::kRedSideband: return -1;
    case Transition::kBlueSideband: return 1;
  }
  return 0;
}

const char* to_string(Transition t) {
  switch (t) {
    case Transition::kCarrier: return "carrier";
    case Transition::kRedSideband: return "red_sideband";
    case Transition::kBlueSideband: return "blue_sideband";
  }
  return "unknown";
}

double lamb_dicke(double omega, double mass, double wavelength, double direction_cosine) {
  detail::require_positive(omega, "omega");
  detail::require_positive(mass, "mass");
  detail::require_positive(wavelength, "wavelength");
  if (!(std::abs(direction_cosine) <= 1.0)) {
    throw ValidationError("direction_cosine", "must lie in [-1, 1]");
  }
  const double x0 = std::sqrt(PhysicalConstants::hbar / (2.0 * mass * omega));
  return kTwoPi / wavelength * std::abs(direction_cosine) * x0;
}

MotionalMode make_mode(const params::TrapMotionConfig& trap, int axis, double wavelength) {
  if (axis < 0 || axis > 2) throw ValidationError("axis", "must be 0, 1 or 2");
  trap.validate();
  MotionalMode mode;
  mode.omega = trap.secular_frequencies[axis];
  mode.n_bar = trap.mean_phonons[axis];
  mode.x0 = std::sqrt(PhysicalConstants::hbar / (2.0 * trap.ion_mass * mode.omega));
  mode.eta = lamb_dicke(mode.omega, trap.ion_mass, wavelength, trap.direction_cosines[axis]);
  return mode;
}

double laguerre(int n, int alpha, double x) {
  if (n < 0) throw ValidationError("n", "must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::complex<double> tw_matrix_element(int n, int n_prime, double eta) {
  const double r = tw_magnitude(n, n_prime, eta);
  switch (std::abs(n - n_prime) % 4) {
    case 0: return {r, 0.0};
    case 1: return {0.0, r};
    case 2: return {-r, 0.0};
    default: return {0.0, -r};
  }
}

double sw_matrix_element(int n, int n_prime, double eta, double phi) {
  // Re(e^{i phi} M) with M = i^d |M|.
  return tw_magnitude(n, n_prime, eta) * shifted_cos(phi, std::abs(n - n_prime));
}

ThermalDistribution thermal_distribution(double n_bar, double tail_epsilon) {
  detail::require_non_negative(n_bar, "n_bar");
  if (!(tail_epsilon > 0.0 && tail_epsilon < 1.0)) {
    throw ValidationError("tail_epsilon", "must lie in (0, 1)");
  }
  ThermalDistribution dist;
  dist.n_bar = n_bar;
  if (n_bar == 0.0) {
    dist.probabilities = {1.0};
    return dist;
  }
  const double q = n_bar / (n_bar + 1.0);
  const double p0 = 1.0 / (n_bar + 1.0);
  // Smallest n_max with q^(n_max + 1) <= epsilon.
  int n_max = 0;
  double tail = q;
  while (tail > tail_epsilon) {
    tail *= q;
    ++n_max;
  }
  dist.n_max = n_max;
  dist.probabilities.resize(n_max + 1);
  CompensatedSum head;
  double p = p0;
  for (int n = 0; n < n_max; ++n) {
    dist.probabilities[n] = p;
    head += p;
    p *= q;
  }
  dist.probabilities[n_max] = 1.0 - head.value();
  return dist;
}

double channel_weight(Transition transition, int n, double eta, double phi, double position_contrast) {
  const int d = phonon_change(transition);
  const int n_prime = n + d;
  if (n_prime < 0) return 0.0;
  if (!(position_contrast > 0.0 && position_contrast <= 1.0)) {
    throw ValidationError("position_contrast", "must lie in (0, 1]");
  }
  const double r = tw_magnitude(n, n_prime, eta);
  const double c = shifted_cos(phi, std::abs(d));
  if (position_contrast == 1.0) return r * r * c * c;
  // <cos^2(phi + delta)> over a Gaussian delta with <cos 2 delta> = contrast.
  return r * r * (0.5 + position_contrast * (c * c - 0.5));
}

CouplingProfile coupling_profile(Transition transition, const MotionalMode& mode,
                                 const ThermalDistribution& dist, double phi,
                                 double position_contrast) {
  CouplingProfile out;
  out.weights.resize(dist.probabilities.size());
  CompensatedSum total;
  for (std::size_t n = 0; n < dist.probabilities.size(); ++n) {
    const double w = dist.probabilities[n] *
                     channel_weight(transition, static_cast<int>(n), mode.eta, phi, position_contrast);
    out.weights[n] = w;
    total += w;
  }
  out.total = total.value();
  return out;
}

double thermal_debye_waller(const MotionalMode& mode, const ThermalDistribution& dist) {
  CompensatedSum acc;
  for (std::size_t n = 0; n < dist.probabilities.size(); ++n) {
    const double m = tw_magnitude(static_cast<int>(n), static_cast<int>(n), mode.eta);
    acc += dist.probabilities[n] * m * m;
  }
  return acc.value();
}

}  // namespace ioncav::motion
