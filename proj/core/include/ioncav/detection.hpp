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

// Electron-shelving state detection with finite discrimination fidelity.
namespace ioncav::experiment {

struct DetectionSample {
  int shelved = 0;
  double estimated_p = 0.0;  // shelved / n_repeats, uncorrected
  double std_error = 0.0;    // sqrt(p (1 - p) / n)
};

// Each repetition is excited with probability p and then misread with
// probability 1 - fidelity. Deterministic for a given seed on every platform.
DetectionSample sample_detection(double p, int n_repeats, double fidelity, std::uint64_t seed);

// Inverts the symmetric misclassification: (p_hat - (1 - f)) / (2 f - 1).
double fidelity_corrected(double estimated_p, double fidelity);

// Derives an independent stream seed for grid point `index`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ioncav::experiment
