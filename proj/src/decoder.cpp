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

#include "ofrec/decoder.hpp"

#include <algorithm>
#include <vector>

#include "ofrec/errors.hpp"

namespace ofrec::decoder {

std::optional<u64> verified_candidate(u64 y, const Instance& instance, const DecodeOptions& opts) {
  const u64 n = instance.modulus();
  const u64 q = instance.register_size();
  auto verifies = [&](u64 r0) { return numtheory::mod_pow(instance.base(), r0, n) == 1; };

  if (opts.rule == CandidateRule::kLastBoundedConvergent) {
    const u64 r0 = numtheory::denominator_candidate(y, q, n);
    return verifies(r0) ? std::optional<u64>(r0) : std::nullopt;
  }
  // Denominators grow along the sequence, so the first verified one is the
  // smallest.
  for (const auto& c : numtheory::convergents(y, q)) {
    if (c.denominator > n) break;
    if (verifies(c.denominator)) return c.denominator;
  }
  return std::nullopt;
}

MassMap verified_masses(const Spectrum& spec, const Instance& instance, const DecodeOptions& opts) {
  if (spec.size() != instance.register_size()) {
    throw DomainError("spectrum length " + std::to_string(spec.size()) + " does not match Q=" +
                      std::to_string(instance.register_size()));
  }
  MassMap out;
  const auto p = spec.probs();
  for (u64 y = 0; y < p.size(); ++y) {
    if (p[y] == 0.0) continue;
    if (auto r0 = verified_candidate(y, instance, opts)) {
      out.entries[*r0] += p[y];
    }
  }
  for (const auto& [r0, m] : out.entries) out.total_verified += m;
  return out;
}

std::optional<u64> select_denominator(const MassMap& masses) {
  if (masses.entries.empty()) return std::nullopt;
  double top = 0.0;
  for (const auto& [r0, m] : masses.entries) top = std::max(top, m);
  // Keys are ascending, so the first one within tolerance of the maximum wins.
  for (const auto& [r0, m] : masses.entries) {
    if (m >= top - kTieTolerance) return r0;
  }
  return std::nullopt;
}

DecodeResult decode_masses(MassMap masses) {
  DecodeResult out;
  out.m_ver = masses.total_verified;
  if (out.m_ver > 0.0) out.r_calc = select_denominator(masses);
  if (out.r_calc) {
    out.m1 = masses.entries.at(*out.r_calc);
    for (const auto& [r0, m] : masses.entries) {
      if (r0 != *out.r_calc) out.m2 = std::max(out.m2, m);
    }
    // A tolerance tie can leave the runner-up a few ulps above the winner.
    out.m2 = std::min(out.m2, out.m1);
  }
  out.mass_map = std::move(masses);
  return out;
}

DecodeResult decode(const Spectrum& spec, const Instance& instance, const DecodeOptions& opts) {
  return decode_masses(verified_masses(spec, instance, opts));
}

bool is_recoverable(const DecodeResult& result, u64 r_true) noexcept {
  return result.r_calc.has_value() && *result.r_calc == r_true;
}

}  // namespace ofrec::decoder
