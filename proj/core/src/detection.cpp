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

#include "ioncav/detection.hpp"

#include <cmath>
#include <random>

#include "ioncav/error.hpp"

namespace ioncav::experiment {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; std distributions are not
// specified bit-for-bit across standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

DetectionSample sample_detection(double p, int n_repeats, double fidelity, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p", "must lie in [0, 1]");
  if (n_repeats <= 0) throw ValidationError("sampling.n_repeats", "must be positive");
  if (!(fidelity > 0.5 && fidelity <= 1.0)) throw ValidationError("sampling.fidelity", "must lie in (0.5, 1]");

  std::mt19937_64 rng(splitmix64(seed));
  const double flip = 1.0 - fidelity;
  DetectionSample out;
  for (int i = 0; i < n_repeats; ++i) {
    bool excited = uniform01(rng) < p;
    if (uniform01(rng) < flip) excited = !excited;
    out.shelved += excited ? 1 : 0;
  }
  out.estimated_p = static_cast<double>(out.shelved) / n_repeats;
  out.std_error = std::sqrt(out.estimated_p * (1.0 - out.estimated_p) / n_repeats);
  return out;
}

double fidelity_corrected(double estimated_p, double fidelity) {
  if (!(fidelity > 0.5 && fidelity <= 1.0)) throw ValidationError("fidelity", "must lie in (0.5, 1]");
  return (estimated_p - (1.0 - fidelity)) / (2.0 * fidelity - 1.0);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace ioncav::experiment
