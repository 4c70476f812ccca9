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

#include "ofrec/numtheory.hpp"

#include <string>

#include "ofrec/errors.hpp"

namespace ofrec::numtheory {

__extension__ using u128 = unsigned __int128;

namespace {

u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

}  // namespace

u64 mod_pow(u64 base, u64 exp, u64 modulus) {
  if (modulus < 2) {
    throw DomainError("mod_pow: modulus must be >= 2, got " + std::to_string(modulus));
  }
  u64 result = 1;
  base %= modulus;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, modulus);
    base = mul_mod(base, base, modulus);
    exp >>= 1;
  }
  return result;
}

u64 gcd(u64 a, u64 b) noexcept {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u64 multiplicative_order(u64 a, u64 n) {
  if (n < 2) {
    throw DomainError("multiplicative_order: modulus must be >= 2, got " + std::to_string(n));
  }
  a %= n;
  if (gcd(a, n) != 1) {
    throw DomainError("multiplicative_order: gcd(" + std::to_string(a) + ", " +
                      std::to_string(n) + ") != 1");
  }
  u64 x = a;
  u64 r = 1;
  while (x != 1) {
    x = mul_mod(x, a, n);
    ++r;
  }
  return r;
}

std::vector<Convergent> convergents(u64 y, u64 q) {
  if (q == 0 || y >= q) {
    throw DomainError("convergents: require 0 <= y < q");
  }
  std::vector<Convergent> out;
  // h/k recurrences seeded with h_{-2}/k_{-2} = 0/1 and h_{-1}/k_{-1} = 1/0.
  u64 h_prev2 = 0, k_prev2 = 1;
  u64 h_prev1 = 1, k_prev1 = 0;
  u64 num = y, den = q;
  while (true) {
    u64 partial = num / den;
    u64 h = partial * h_prev1 + h_prev2;
    u64 k = partial * k_prev1 + k_prev2;
    out.push_back({h, k});
    u64 rem = num % den;
    if (rem == 0) break;
    num = den;
    den = rem;
    h_prev2 = h_prev1;
    k_prev2 = k_prev1;
    h_prev1 = h;
    k_prev1 = k;
  }
  return out;
}

u64 denominator_candidate(u64 y, u64 q, u64 n) {
  if (q == 0 || y >= q) {
    throw DomainError("denominator_candidate: require 0 <= y < q");
  }
  // Same recurrence as convergents(), tracking denominators only.
  u64 k_prev2 = 1, k_prev1 = 0;
  u64 best = 1;
  u64 num = y, den = q;
  while (true) {
    const u64 k = (num / den) * k_prev1 + k_prev2;
    if (k > n) break;
    best = k;
    const u64 rem = num % den;
    if (rem == 0) break;
    num = den;
    den = rem;
    k_prev2 = k_prev1;
    k_prev1 = k;
  }
  return best;
}

Instance Instance::make(u64 modulus, u64 base, unsigned precision) {
  if (modulus < 2) {
    throw DomainError("N=" + std::to_string(modulus) + " must be >= 2");
  }
  if (precision < 1 || precision > kMaxPrecision) {
    throw DomainError("t=" + std::to_string(precision) + " outside [1, " +
                      std::to_string(kMaxPrecision) + "]");
  }
  const u64 reduced = base % modulus;
  if (gcd(reduced, modulus) != 1) {
    throw DomainError("a=" + std::to_string(base) + " not coprime to N=" + std::to_string(modulus));
  }
  return Instance(modulus, reduced, precision, multiplicative_order(reduced, modulus));
}

std::optional<unsigned> mersenne_exponent(u64 modulus) noexcept {
  for (unsigned n = 2; n < 64; ++n) {
    if ((u64{1} << n) - 1 == modulus) return n;
  }
  return std::nullopt;
}

std::optional<unsigned> shift_index(u64 a, u64 modulus) {
  a %= modulus;
  u64 x = 1 % modulus;
  for (unsigned h = 0; h < 64 && h <= modulus; ++h) {
    if (x == a) return h;
    x = mul_mod(x, 2, modulus);
  }
  return std::nullopt;
}

}  // namespace ofrec::numtheory
