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

#include <cstdint>
#include <map>
#include <optional>

#include "ofrec/numtheory.hpp"
#include "ofrec/spectrum.hpp"

namespace ofrec::decoder {

using numtheory::Instance;
using numtheory::u64;
using spectrum::Spectrum;

/// How an outcome y is mapped to a candidate denominator.
enum class CandidateRule {
  /// Denominator of the last convergent with denominator <= N, kept only if
  /// it verifies.
  kLastBoundedConvergent,
  /// Smallest verified denominator among all convergents with denominator
  /// <= N.
  kSmallestVerifiedConvergent,
};

struct DecodeOptions {
  CandidateRule rule = CandidateRule::kLastBoundedConvergent;
};

/// Verified candidate denominators r0 and their aggregated mass m(r0).
struct MassMap {
  std::map<u64, double> entries;
  double total_verified = 0.0;

  friend bool operator==(const MassMap&, const MassMap&) = default;
};

struct DecodeResult {
  std::optional<u64> r_calc;
  double m_ver = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  MassMap mass_map;

  friend bool operator==(const DecodeResult&, const DecodeResult&) = default;
};

/// Masses whose difference is at most this are treated as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Candidate denominator of outcome y if it passes a^{r0} = 1 (mod N).
std::optional<u64> verified_candidate(u64 y, const Instance& instance,
                                      const DecodeOptions& opts = {});

/// Outcomes with p(y) = 0 are skipped; masses are accumulated in increasing y.
MassMap verified_masses(const Spectrum& spec, const Instance& instance,
                        const DecodeOptions& opts = {});

/// Argmax of the mass map; nullopt for an empty map. Among masses within
/// kTieTolerance of the maximum, the smallest denominator wins.
std::optional<u64> select_denominator(const MassMap& masses);

DecodeResult decode_masses(MassMap masses);
DecodeResult decode(const Spectrum& spec, const Instance& instance, const DecodeOptions& opts = {});

bool is_recoverable(const DecodeResult& result, u64 r_true) noexcept;

}  // namespace ofrec::decoder
