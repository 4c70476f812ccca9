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

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "ofrec/errors.hpp"
#include "ofrec/numtheory.hpp"
#include "support/oracles.hpp"

using namespace ofrec::numtheory;

TEST_CASE("mod_pow examples") {
  CHECK(mod_pow(2, 4, 15) == 1);
  CHECK(mod_pow(2, 3, 7) == 1);
  CHECK(mod_pow(4, 8, 15) == 1);
  CHECK(mod_pow(7, 0, 15) == 1);
  CHECK(mod_pow(0, 0, 2) == 1);
  CHECK_THROWS_AS(mod_pow(2, 3, 1), ofrec::DomainError);
  CHECK_THROWS_AS(mod_pow(2, 3, 0), ofrec::DomainError);
}

TEST_CASE("mod_pow agrees with repeated multiplication") {
  for (u64 n = 2; n <= 127; ++n) {
    for (u64 a = 0; a < n; a += 3) {
      for (u64 e = 0; e <= n; e += 5) CHECK(mod_pow(a, e, n) == oracle::power_mod_naive(a, e, n));
    }
  }
  // Full 64-bit operands stay exact.
  CHECK(mod_pow(0xffffffffffffffc4ULL, 2, 0xffffffffffffffc5ULL) == 1);
}

TEST_CASE("multiplicative_order examples") {
  CHECK(multiplicative_order(2, 15) == 4);
  CHECK(multiplicative_order(2, 7) == 3);
  CHECK(multiplicative_order(4, 15) == 2);
  CHECK(multiplicative_order(2, 127) == 7);
  CHECK(multiplicative_order(2, 63) == 6);
  for (u64 n = 2; n < 40; ++n) CHECK(multiplicative_order(1, n) == 1);
  CHECK_THROWS_AS(multiplicative_order(3, 15), ofrec::DomainError);
  CHECK_THROWS_AS(multiplicative_order(0, 7), ofrec::DomainError);
}

TEST_CASE("order is minimal and divides the Carmichael function") {
  for (u64 n = 2; n <= 127; ++n) {
    const u64 lambda = oracle::carmichael_naive(n);
    for (u64 a = 1; a < n; ++a) {
      if (gcd(a, n) != 1) continue;
      const u64 r = multiplicative_order(a, n);
      CHECK(r == oracle::order_naive(a, n));
      CHECK(lambda % r == 0);
      CHECK(r <= n - 1 + (n == 2 ? 1 : 0));
    }
  }
}

TEST_CASE("convergents examples") {
  using C = Convergent;
  CHECK(convergents(85, 256) == std::vector<C>{{0, 1}, {1, 3}, {85, 256}});
  CHECK(convergents(128, 256) == std::vector<C>{{0, 1}, {1, 2}});
  CHECK(convergents(65, 256) == std::vector<C>{{0, 1}, {1, 3}, {1, 4}, {16, 63}, {65, 256}});
  CHECK(convergents(0, 256) == std::vector<C>{{0, 1}});
  CHECK_THROWS_AS(convergents(256, 256), ofrec::DomainError);
  CHECK_THROWS_AS(convergents(0, 0), ofrec::DomainError);
}

TEST_CASE("convergent properties hold exhaustively for Q up to 1024") {
  for (unsigned t = 1; t <= 10; ++t) {
    const u64 q = u64{1} << t;
    for (u64 y = 0; y < q; ++y) {
      const auto cs = convergents(y, q);
      REQUIRE(!cs.empty());
      CHECK(cs.front() == Convergent{0, 1});
      const u64 g = gcd(y, q);
      CHECK(cs.back() == Convergent{y / g, q / g});
      for (std::size_t i = 0; i < cs.size(); ++i) {
        CHECK(gcd(cs[i].numerator, cs[i].denominator) == 1);
        if (i >= 2) CHECK(cs[i].denominator > cs[i - 1].denominator);
        if (i + 1 < cs.size()) {
          // |y/Q - h/k| < 1/k^2  <=>  |y k - h Q| k < Q, exact in integers.
          const auto lhs = static_cast<long long>(y * cs[i].denominator) -
                           static_cast<long long>(cs[i].numerator * q);
          CHECK(static_cast<u64>(std::llabs(lhs)) * cs[i].denominator < q);
        }
      }
    }
  }
}

TEST_CASE("denominator_candidate examples") {
  CHECK(denominator_candidate(64, 256, 15) == 4);
  CHECK(denominator_candidate(0, 256, 15) == 1);
  CHECK(denominator_candidate(43, 256, 7) == 6);
  CHECK(denominator_candidate(32, 256, 15) == 8);
  CHECK(denominator_candidate(128, 256, 15) == 2);
}

TEST_CASE("denominator_candidate matches the best-approximation oracle") {
  for (unsigned t = 1; t <= 10; ++t) {
    const u64 q = u64{1} << t;
    for (u64 n : {2, 3, 7, 15, 31, 63, 127, 200, 1000}) {
      for (u64 y = 0; y < q; ++y) {
        const u64 r0 = denominator_candidate(y, q, n);
        CHECK(r0 <= n);
        CHECK(r0 == oracle::candidate_naive(y, q, n));
        u64 last = 1;
        for (const auto& c : convergents(y, q)) {
          if (c.denominator <= n) last = c.denominator;
        }
        CHECK(r0 == last);
      }
    }
  }
}

TEST_CASE("nearest outcome to every coprime peak has the order as a convergent denominator") {
  // |y/Q - j/r| <= 1/(2Q) < 1/(2r^2), so j/r is always a convergent. Whether it
  // is also the last one bounded by N fails only where a later convergent
  // denominator still fits under N = 127.
  std::set<std::tuple<u64, unsigned, u64>> exceptions;
  for (u64 n : {3, 7, 15, 31, 63, 127}) {
    for (u64 s : {1, 2, 3, 4}) {
      const u64 a = mod_pow(2, s, n);
      const u64 r = multiplicative_order(a, n);
      if (r == 1) continue;
      for (unsigned t : {8u, 10u}) {
        const u64 q = u64{1} << t;
        for (u64 j = 1; j < r; ++j) {
          if (gcd(j, r) != 1) continue;
          const u64 y = static_cast<u64>(std::llround(static_cast<double>(q * j) / static_cast<double>(r))) % q;
          const auto cs = convergents(y, q);
          CHECK(std::any_of(cs.begin(), cs.end(), [&](const Convergent& c) { return c.denominator == r; }));
          if (denominator_candidate(y, q, n) != r) exceptions.insert({n, t, y});
        }
      }
    }
  }
  const std::set<std::tuple<u64, unsigned, u64>> expected{{127, 8, 37}, {127, 8, 219}};
  CHECK(exceptions == expected);
  CHECK(denominator_candidate(37, 256, 127) == 83);
}

TEST_CASE("Instance validation and derived fields") {
  const auto inst = Instance::make(15, 17, 8);
  CHECK(inst.modulus() == 15);
  CHECK(inst.base() == 2);
  CHECK(inst.precision() == 8);
  CHECK(inst.register_size() == 256);
  CHECK(inst.order() == 4);
  CHECK(!inst.degenerate());
  CHECK(Instance::make(3, 4, 8).degenerate());
  CHECK_THROWS_WITH_AS(Instance::make(15, 3, 8), "a=3 not coprime to N=15", ofrec::DomainError);
  CHECK_THROWS_AS(Instance::make(1, 1, 8), ofrec::DomainError);
  CHECK_THROWS_AS(Instance::make(15, 2, 0), ofrec::DomainError);
  CHECK_THROWS_AS(Instance::make(15, 2, Instance::kMaxPrecision + 1), ofrec::DomainError);
  CHECK_THROWS_AS(Instance::make(15, 15, 8), ofrec::DomainError);
}

TEST_CASE("Mersenne helpers") {
  CHECK(mersenne_exponent(127) == 7u);
  CHECK(mersenne_exponent(3) == 2u);
  CHECK(!mersenne_exponent(21).has_value());
  CHECK(shift_index(8, 15) == 3u);
  CHECK(shift_index(1, 15) == 0u);
  CHECK(!shift_index(7, 15).has_value());
}
