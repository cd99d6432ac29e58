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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ioncav/error.hpp"

using namespace ioncav;
using namespace ioncav::experiment;

TEST(Detection, deterministic_for_seed) {
  const DetectionSample a = sample_detection(0.3, 100, 0.99, 42);
  const DetectionSample b = sample_detection(0.3, 100, 0.99, 42);
  EXPECT_EQ(a.shelved, b.shelved);
  EXPECT_EQ(a.estimated_p, b.estimated_p);
}

TEST(Detection, frozen_reference_draw) {
  // Values from an independent reimplementation of splitmix64 + mt19937_64.
  EXPECT_EQ(sample_detection(0.5, 1000, 1.0, 1).shelved, 477);
  EXPECT_EQ(sample_detection(0.3, 100, 0.99, 42).shelved, 40);
  EXPECT_EQ(stream_seed(1, 0), 12492877119299984720ULL);
}

TEST(Detection, extremes) {
  EXPECT_EQ(sample_detection(0.0, 500, 1.0, 3).shelved, 0);
  EXPECT_EQ(sample_detection(1.0, 500, 1.0, 3).shelved, 500);
  EXPECT_GT(sample_detection(0.0, 5000, 0.9, 3).shelved, 0);
}

TEST(Detection, binomial_statistics) {
  // Mean and variance across independent streams match the misclassified
  // binomial model.
  const double p = 0.2, f = 0.97;
  const double q = p * f + (1.0 - p) * (1.0 - f);
  const int n = 100, trials = 4000;
  double sum = 0.0, sum2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double e = sample_detection(p, n, f, stream_seed(9, t)).estimated_p;
    sum += e;
    sum2 += e * e;
  }
  const double m = sum / trials;
  const double var = sum2 / trials - m * m;
  EXPECT_NEAR(m, q, 4.0 * std::sqrt(q * (1.0 - q) / n / trials));
  EXPECT_NEAR(var / (q * (1.0 - q) / n), 1.0, 0.1);
  EXPECT_NEAR(fidelity_corrected(m, f), p, 0.01);
}

TEST(Detection, std_error) {
  const DetectionSample s = sample_detection(0.3, 200, 0.99, 5);
  EXPECT_NEAR(s.std_error, std::sqrt(s.estimated_p * (1.0 - s.estimated_p) / 200.0), 1e-15);
}

TEST(Detection, fidelity_correction_inverts_misclassification) {
  for (double p : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    for (double f : {0.8, 0.99, 1.0}) {
      EXPECT_NEAR(fidelity_corrected(p * f + (1.0 - p) * (1.0 - f), f), p, 1e-14);
    }
  }
}

TEST(Detection, stream_seeds_are_distinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 4; ++s) {
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(stream_seed(s, i));
  }
  EXPECT_EQ(seen.size(), 4000u);
}

TEST(Detection, validation) {
  EXPECT_THROW(sample_detection(1.1, 10, 0.99, 1), ValidationError);
  EXPECT_THROW(sample_detection(0.5, 0, 0.99, 1), ValidationError);
  EXPECT_THROW(sample_detection(0.5, 10, 0.5, 1), ValidationError);
  EXPECT_THROW(fidelity_corrected(0.5, 1.5), ValidationError);
}
