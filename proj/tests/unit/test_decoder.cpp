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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "ofrec/decoder.hpp"
#include "ofrec/features.hpp"
#include "ofrec/random.hpp"
#include "ofrec/spectrum.hpp"
#include "support/oracles.hpp"

using namespace ofrec;
using namespace ofrec::decoder;
using numtheory::Instance;
using spectrum::Spectrum;

namespace {

Spectrum two_point(unsigned t, std::uint64_t y1, double m1, std::uint64_t y2, double m2) {
  std::vector<double> p(std::size_t{1} << t, 0.0);
  p[y1] += m1;
  p[y2] += m2;
  return Spectrum::from_probs(t, std::move(p));
}

MassMap masses(std::map<std::uint64_t, double> entries) {
  MassMap m;
  m.entries = std::move(entries);
  for (const auto& [k, v] : m.entries) m.total_verified += v;
  return m;
}

Spectrum random_spectrum(Rng& rng, unsigned t, bool sparse) {
  std::vector<double> p(std::size_t{1} << t, 0.0);
  if (sparse) {
    const auto support = 1 + rng.below(6);
    for (std::uint64_t i = 0; i < support; ++i) p[rng.below(p.size())] += static_cast<double>(1 + rng.below(40));
  } else {
    for (auto& v : p) v = rng.uniform01() < 0.2 ? 0.0 : rng.uniform01();
    p[rng.below(p.size())] += 1.0;
  }
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= s;
  return Spectrum::from_probs(t, std::move(p));
}

}  // namespace

TEST_CASE("verified masses: ideal N=15 a=2 comb") {
  const auto inst = Instance::make(15, 2, 8);
  const auto m = verified_masses(spectrum::ideal_spectrum(inst), inst);
  CHECK(m.entries == std::map<std::uint64_t, double>{{4, 0.5}});
  CHECK(m.total_verified == 0.5);
  const auto r = decode(spectrum::ideal_spectrum(inst), inst);
  CHECK(r.r_calc == 4u);
  CHECK(r.m1 == 0.5);
  CHECK(r.m2 == 0.0);
  CHECK(is_recoverable(r, 4));
}

TEST_CASE("the incorrect-period fixture") {
  const auto inst = Instance::make(15, 4, 8);
  const auto spec = two_point(8, 32, 0.6, 128, 0.4);
  const auto r = decode(spec, inst);
  CHECK(r.mass_map.entries == std::map<std::uint64_t, double>{{2, 0.4}, {8, 0.6}});
  CHECK(r.r_calc == 8u);
  CHECK(r.m1 == 0.6);
  CHECK(r.m2 == 0.4);
  CHECK(!is_recoverable(r, inst.order()));
}

TEST_CASE("point mass at zero has no verified candidate") {
  const auto inst = Instance::make(15, 2, 8);
  const auto r = decode(Spectrum::point_mass(8, 0), inst);
  CHECK(r.mass_map.entries.empty());
  CHECK(r.m_ver == 0.0);
  CHECK(!r.r_calc);
  CHECK(!is_recoverable(r, 4));
  // r0 = 1 verifies only for a = 1.
  CHECK(decode(Spectrum::point_mass(8, 0), Instance::make(15, 16, 8)).r_calc == 1u);
}

TEST_CASE("tie rule: smallest denominator among near-equal masses") {
  CHECK(decode_masses(masses({{2, 0.3}, {6, 0.3}})).r_calc == 2u);
  CHECK(decode_masses(masses({{2, 0.3}, {6, 0.3 + 5e-13}})).r_calc == 2u);
  CHECK(decode_masses(masses({{2, 0.3}, {6, 0.3 + 5e-12}})).r_calc == 6u);
  // Chained near-ties resolve against the maximum, not pairwise.
  const auto chained = decode_masses(masses({{2, 0.3}, {4, 0.3 + 0.8e-12}, {6, 0.3 + 1.6e-12}}));
  CHECK(chained.r_calc == 4u);
  CHECK(chained.m2 <= chained.m1);
  CHECK(!select_denominator(MassMap{}).has_value());
}

TEST_CASE("candidate rules") {
  const auto inst = Instance::make(15, 2, 8);
  // 43/256: convergents 0/1, 1/5, 1/6, 21/125; bounded by 15 the last is 6.
  CHECK(!verified_candidate(43, inst).has_value());
  // 96/256 = 3/8: convergents 0/1, 1/2, 1/3, 3/8. Only 8 is verifiable for a=2 (order 4 does not divide 2 or 3).
  CHECK(verified_candidate(96, inst) == 8u);
  DecodeOptions alt;
  alt.rule = CandidateRule::kSmallestVerifiedConvergent;
  CHECK(verified_candidate(96, inst, alt) == 8u);
  // 68/256 = 17/64: convergents 0/1, 1/3, 1/4, 4/15, 17/64. The last bounded one (15) fails.
  CHECK(!verified_candidate(68, inst).has_value());
  CHECK(verified_candidate(68, inst, alt) == 4u);
  // 128/256 under a=4: both rules give 2.
  const auto inst4 = Instance::make(15, 4, 8);
  CHECK(verified_candidate(128, inst4, alt) == 2u);
  // 32/256 = 1/8 under a=4: only convergent is 8; alt rule keeps it.
  CHECK(verified_candidate(32, inst4, alt) == 8u);
}

TEST_CASE("smallest-verified rule can differ from the default") {
  const auto inst = Instance::make(63, 8, 8);
  DecodeOptions alt;
  alt.rule = CandidateRule::kSmallestVerifiedConvergent;
  bool differs = false;
  for (std::uint64_t y = 0; y < 256; ++y) {
    const auto d = verified_candidate(y, inst);
    const auto s = verified_candidate(y, inst, alt);
    if (s) {
      CHECK(*s % inst.order() == 0);
      if (d) CHECK(*s <= *d);
    }
    differs = differs || d != s;
  }
  CHECK(differs);
}

TEST_CASE("decode agrees with the brute-force oracle") {
  Rng rng(1234);
  const std::vector<std::uint64_t> moduli{3, 5, 7, 15, 21, 31, 63, 127};
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = moduli[rng.below(moduli.size())];
    std::uint64_t a = 0;
    do {
      a = 1 + rng.below(n - 1);
    } while (numtheory::gcd(a, n) != 1);
    const unsigned t = 1 + static_cast<unsigned>(rng.below(10));
    const auto inst = Instance::make(n, a, t);
    const auto spec = random_spectrum(rng, t, trial % 2 == 0);
    const auto got = decode(spec, inst);
    const auto ref = oracle::decode_naive(spec.probs(), n, inst.base());
    CHECK(got.r_calc == ref.r_calc);
    CHECK(got.m_ver == ref.m_ver);
    CHECK(got.m1 == ref.m1);
    CHECK(got.m2 == ref.m2);
    for (std::uint64_t r = 1; r <= n; ++r) {
      const auto it = got.mass_map.entries.find(r);
      const double m = it == got.mass_map.entries.end() ? 0.0 : it->second;
      CHECK(m == ref.mass[r]);
    }
  }
}

TEST_CASE("mass map keys are multiples of the true order") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = std::vector<std::uint64_t>{7, 15, 31, 63, 127}[trial % 5];
    const auto inst = Instance::make(n, numtheory::mod_pow(2, 1 + trial % 4, n), 9);
    if (inst.degenerate()) continue;
    const auto spec = random_spectrum(rng, 9, false);
    const auto r = decode(spec, inst);
    for (const auto& [r0, m] : r.mass_map.entries) {
      CHECK(r0 % inst.order() == 0);
      CHECK(r0 <= n);
      CHECK(numtheory::mod_pow(inst.base(), r0, n) == 1);
    }
    CHECK(r.m_ver <= 1.0 + 1e-9);
    CHECK(r.m1 >= r.m2);
  }
}

TEST_CASE("scaling and renormalizing leaves the decision unchanged") {
  Rng rng(8);
  const auto inst = Instance::make(63, 2, 8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = random_spectrum(rng, 8, trial % 2 == 0);
    std::vector<double> scaled(spec.probs().begin(), spec.probs().end());
    for (auto& v : scaled) v *= 3.7;
    const double s = std::accumulate(scaled.begin(), scaled.end(), 0.0);
    for (auto& v : scaled) v /= s;
    const auto a = decode(spec, inst);
    const auto b = decode(Spectrum::from_probs(8, scaled), inst);
    CHECK(a.r_calc == b.r_calc);
    const auto fa = features::verified_fractions(a);
    const auto fb = features::verified_fractions(b);
    CHECK(fa.first == doctest::Approx(fb.first).epsilon(1e-12));
    CHECK(fa.second == doctest::Approx(fb.second).epsilon(1e-12));
  }
}

TEST_CASE("noiseless spectra are recoverable across the grid") {
  for (std::uint64_t n : {3, 7, 15, 31, 63, 127}) {
    for (std::uint64_t a : {2, 4, 8, 16}) {
      if (a % n == 1) continue;
      for (unsigned t : {8u, 10u}) {
        const auto inst = Instance::make(n, a, t);
        const auto r = decode(spectrum::ideal_spectrum(inst), inst);
        CHECK(r.r_calc == inst.order());
        CHECK(is_recoverable(r, inst.order()));
      }
    }
  }
}
