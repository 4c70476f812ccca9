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

#include "ofrec/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ofrec/kernels.hpp"

namespace ofrec::features {

namespace {
constexpr double kFlatThreshold = 1e-15;
}

double autocorr_peak(const Spectrum& spec) {
  const auto p = spec.probs();
  const std::size_t q = p.size();
  if (q < 2) return 0.0;
  const double u = 1.0 / static_cast<double>(q);
  std::vector<double> resid(q);
  for (std::size_t y = 0; y < q; ++y) resid[y] = p[y] - u;
  std::vector<double> a(q);
  kernels::circular_autocorrelation(resid, a);
  if (a[0] < kFlatThreshold) return 0.0;
  const double peak = *std::max_element(a.begin() + 1, a.end());
  return peak / a[0];
}

double normalized_entropy(const Spectrum& spec) {
  const auto p = spec.probs();
  if (p.size() < 2) return 0.0;
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  const double hn = h / std::log(static_cast<double>(p.size()));
  return std::clamp(hn, 0.0, 1.0);
}

std::pair<double, double> verified_fractions(const DecodeResult& result) {
  if (!(result.m_ver > 0.0)) return {0.0, 0.0};
  return {result.m1 / result.m_ver, (result.m1 - result.m2) / result.m_ver};
}

FeatureVector feature_vector(const Spectrum& spec, const DecodeResult& result) {
  const auto [m1_frac, margin] = verified_fractions(result);
  return {autocorr_peak(spec), normalized_entropy(spec), m1_frac, margin};
}

FeatureVector feature_vector(const Spectrum& spec, const Instance& instance,
                             const decoder::DecodeOptions& opts) {
  return feature_vector(spec, decoder::decode(spec, instance, opts));
}

}  // namespace ofrec::features
