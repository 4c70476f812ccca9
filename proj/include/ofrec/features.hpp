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

#include <array>
#include <string_view>
#include <utility>

#include "ofrec/decoder.hpp"
#include "ofrec/spectrum.hpp"

namespace ofrec::features {

using decoder::DecodeResult;
using numtheory::Instance;
using spectrum::Spectrum;

inline constexpr std::size_t kFeatureCount = 4;

/// Canonical feature order used by every table, report and classifier.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "a_peak", "h_norm", "m1_frac", "margin_frac"};

/// Whether a larger raw value indicates recoverability. Entropy is reversed.
inline constexpr std::array<bool, kFeatureCount> kLargerIsBetter = {true, false, true, true};

struct FeatureVector {
  double a_peak = 0.0;
  double h_norm = 0.0;
  double m1_frac = 0.0;
  double margin_frac = 0.0;

  std::array<double, kFeatureCount> as_array() const { return {a_peak, h_norm, m1_frac, margin_frac}; }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// max over l != 0 of A(l) / A(0) for the circular autocorrelation A of
/// q = p - 1/Q. Returns 0 when A(0) < 1e-15.
double autocorr_peak(const Spectrum& spec);

/// Shannon entropy divided by log Q, with 0 log 0 = 0.
double normalized_entropy(const Spectrum& spec);

/// (M1 / M_ver, (M1 - M2) / M_ver); both 0 when M_ver = 0.
std::pair<double, double> verified_fractions(const DecodeResult& result);

/// Assembles the four features from an existing decode. Never consults the
/// true order.
FeatureVector feature_vector(const Spectrum& spec, const DecodeResult& result);
FeatureVector feature_vector(const Spectrum& spec, const Instance& instance,
                             const decoder::DecodeOptions& opts = {});

}  // namespace ofrec::features
