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

#include "ofrec/kernels.hpp"

#include <omp.h>

#include <cstddef>
#include <vector>

#include "ofrec/errors.hpp"

namespace ofrec::kernels {

namespace {

constexpr std::ptrdiff_t kParallelThreshold = 256;

void check_lengths(std::size_t a, std::size_t b, std::size_t c) {
  if (a != b || a != c) {
    throw DomainError("kernel length mismatch");
  }
}

}  // namespace

void circular_convolve_serial(std::span<const double> signal, std::span<const double> kernel,
                              std::span<double> out) {
  check_lengths(signal.size(), kernel.size(), out.size());
  const std::size_t n = signal.size();
  for (std::size_t y = 0; y < n; ++y) {
    double acc = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      acc += signal[(y + n - l) % n] * kernel[l];
    }
    out[y] = acc;
  }
}

void circular_convolve(std::span<const double> signal, std::span<const double> kernel,
                       std::span<double> out) {
  check_lengths(signal.size(), kernel.size(), out.size());
  const auto n = static_cast<std::ptrdiff_t>(signal.size());
  // Zero kernel taps only ever add +0.0, so skipping them keeps the result
  // identical to the dense reference.
  std::vector<std::ptrdiff_t> taps;
  for (std::ptrdiff_t l = 0; l < n; ++l) {
    if (kernel[l] != 0.0) taps.push_back(l);
  }
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t y = 0; y < n; ++y) {
    double acc = 0.0;
    for (std::ptrdiff_t l : taps) {
      std::ptrdiff_t src = y - l;
      if (src < 0) src += n;
      acc += signal[src] * kernel[l];
    }
    out[y] = acc;
  }
}

void circular_autocorrelation_serial(std::span<const double> q, std::span<double> out) {
  check_lengths(q.size(), out.size(), q.size());
  const std::size_t n = q.size();
  for (std::size_t l = 0; l < n; ++l) {
    double acc = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      acc += q[y] * q[(y + l) % n];
    }
    out[l] = acc;
  }
}

void circular_autocorrelation(std::span<const double> q, std::span<double> out) {
  check_lengths(q.size(), out.size(), q.size());
  const auto n = static_cast<std::ptrdiff_t>(q.size());
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t l = 0; l < n; ++l) {
    double acc = 0.0;
    // Split at the wrap point instead of a modulo per element.
    for (std::ptrdiff_t y = 0; y < n - l; ++y) acc += q[y] * q[y + l];
    for (std::ptrdiff_t y = n - l; y < n; ++y) acc += q[y] * q[y + l - n];
    out[l] = acc;
  }
}

int worker_count() { return omp_get_max_threads(); }

void set_worker_count(int workers) {
  if (workers < 1) throw DomainError("worker count must be >= 1");
  omp_set_num_threads(workers);
}

}  // namespace ofrec::kernels
