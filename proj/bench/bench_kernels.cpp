// Copyright 2026 The ofrec Authors
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

// Serial reference versus OpenMP kernels on identical inputs.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ofrec/kernels.hpp"
#include "ofrec/ml/forest.hpp"
#include "ofrec/random.hpp"
#include "ofrec/spectrum.hpp"

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
  ofrec::Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform01();
  return v;
}

template <bool Serial>
void BM_Convolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto signal = random_signal(n, 1);
  const auto kernel = ofrec::spectrum::gaussian_kernel(n, 6.0);
  std::vector<double> out(n);
  for (auto _ : state) {
    if constexpr (Serial) {
      ofrec::kernels::circular_convolve_serial(signal, kernel.weights(), out);
    } else {
      ofrec::kernels::circular_convolve(signal, kernel.weights(), out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Serial>
void BM_Autocorrelation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto q = random_signal(n, 2);
  std::vector<double> out(n);
  for (auto _ : state) {
    if constexpr (Serial) {
      ofrec::kernels::circular_autocorrelation_serial(q, out);
    } else {
      ofrec::kernels::circular_autocorrelation(q, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

ofrec::ml::Samples synthetic_samples(std::size_t n) {
  ofrec::Rng rng(3);
  ofrec::ml::Samples s;
  for (std::size_t i = 0; i < n; ++i) {
    double row[4];
    for (auto& x : row) x = rng.uniform01();
    s.x.push_row(row);
    s.y.push_back(row[0] + 0.3 * rng.uniform01() > 0.6 ? 1 : 0);
  }
  return s;
}

template <bool Serial>
void BM_Forest(benchmark::State& state) {
  const auto samples = synthetic_samples(static_cast<std::size_t>(state.range(0)));
  ofrec::ml::ForestParams params;
  params.n_trees = 50;
  params.seed = 7;
  for (auto _ : state) {
    auto model = Serial ? ofrec::ml::fit_forest_serial(samples, params) : ofrec::ml::fit_forest(samples, params);
    benchmark::DoNotOptimize(model.trees().size());
  }
}

}  // namespace

BENCHMARK(BM_Convolve<true>)->Name("convolve/serial")->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(BM_Convolve<false>)->Name("convolve/omp")->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(BM_Autocorrelation<true>)->Name("autocorr/serial")->Arg(1 << 10)->Arg(1 << 12);
BENCHMARK(BM_Autocorrelation<false>)->Name("autocorr/omp")->Arg(1 << 10)->Arg(1 << 12);
BENCHMARK(BM_Forest<true>)->Name("forest/serial")->Arg(2000);
BENCHMARK(BM_Forest<false>)->Name("forest/omp")->Arg(2000);

BENCHMARK_MAIN();
