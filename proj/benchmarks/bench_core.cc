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

#include <benchmark/benchmark.h>

#include <vector>

#include "ioncav/bloch.hpp"
#include "ioncav/cavity_field.hpp"
#include "ioncav/constants.hpp"
#include "ioncav/experiment.hpp"
#include "ioncav/fitting.hpp"
#include "ioncav/motion.hpp"

using namespace ioncav;

namespace {

const params::CavityFigures& figures() {
  static const params::CavityFigures f = params::derive_cavity_figures(params::CavityConfig{});
  return f;
}

}  // namespace

static void BM_MatrixElement(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(motion::tw_matrix_element(n, n + 1, 0.025));
}
BENCHMARK(BM_MatrixElement)->Arg(0)->Arg(20)->Arg(300);

static void BM_SweptField(benchmark::State& state) {
  const double nu = state.range(0) / 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(field::integrate_swept_field(figures(), field::SweepSpec{nu, 20.0, 20}));
  }
}
BENCHMARK(BM_SweptField)->Arg(16)->Arg(46)->Unit(benchmark::kMillisecond);

static void BM_BlochSingleChannel(benchmark::State& state) {
  const auto f = field::integrate_swept_field(figures(), field::SweepSpec{0.16, 20.0, 20});
  bloch::DriveSpec d;
  d.omega_peak = kTwoPi * 15.5e3;
  d.detuning = 0.16 * figures().kappa_hwhm;
  d.gamma_pop = kTwoPi * 0.17;
  d.gamma_laser = kPi * 6e3;
  for (auto _ : state) benchmark::DoNotOptimize(bloch::integrate_bloch(d, f).final_state);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.times.size() / 2));
}
BENCHMARK(BM_BlochSingleChannel)->Unit(benchmark::kMicrosecond);

static void BM_ThermalSpectrum(benchmark::State& state) {
  const experiment::ExperimentSetup setup;
  experiment::DetuningGrid g = experiment::default_grid(setup, 0.16, experiment::Transition::kCarrier);
  g.points = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        experiment::simulate_spectrum(setup, 0.16, kTwoPi * 15.5e3, 0.0, experiment::Transition::kCarrier, g));
  }
}
BENCHMARK(BM_ThermalSpectrum)->Arg(31)->Arg(121)->Unit(benchmark::kMillisecond);

static void BM_LorentzianFit(benchmark::State& state) {
  std::vector<double> x, y;
  for (int i = 0; i < 121; ++i) {
    x.push_back(-60e3 + 1e3 * i);
    y.push_back(experiment::lorentzian(x.back(), 7e3, 13e3, 0.6, 0.01) + 1e-3 * ((i * 37) % 11 - 5));
  }
  for (auto _ : state) benchmark::DoNotOptimize(experiment::fit_lorentzian(x, y));
}
BENCHMARK(BM_LorentzianFit);

BENCHMARK_MAIN();
