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

#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference
// (`*_serial`) kept for testing and benchmarking; the OpenMP version computes
// every output element with the same summation order, so the two agree
// bit-for-bit regardless of thread count.

#include <span>

namespace ofrec::kernels {

/// out[y] = sum_l signal[(y - l) mod Q] * kernel[l]. All spans of length Q,
/// `out` must not alias the inputs.
void circular_convolve_serial(std::span<const double> signal, std::span<const double> kernel,
                              std::span<double> out);
void circular_convolve(std::span<const double> signal, std::span<const double> kernel,
                       std::span<double> out);

/// out[l] = sum_y q[y] * q[(y + l) mod Q].
void circular_autocorrelation_serial(std::span<const double> q, std::span<double> out);
void circular_autocorrelation(std::span<const double> q, std::span<double> out);

/// OpenMP team size used by every parallel region in the library.
int worker_count();
void set_worker_count(int workers);

}  // namespace ofrec::kernels
