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
#include <optional>
#include <vector>

namespace ofrec::numtheory {

using u64 = std::uint64_t;

/// base^exp mod modulus, exact for any 64-bit modulus.
u64 mod_pow(u64 base, u64 exp, u64 modulus);

u64 gcd(u64 a, u64 b) noexcept;

/// Smallest r > 0 with a^r = 1 (mod n). Throws DomainError if gcd(a, n) != 1.
u64 multiplicative_order(u64 a, u64 n);

struct Convergent {
  u64 numerator = 0;
  u64 denominator = 1;
  friend bool operator==(const Convergent&, const Convergent&) = default;
};

/// Full convergent sequence of y/q from the Euclidean expansion, starting at
/// 0/1 and ending at y/q in lowest terms.
std::vector<Convergent> convergents(u64 y, u64 q);

/// Denominator of the last convergent of y/q whose denominator is <= n.
/// Always defined because 0/1 qualifies.
u64 denominator_candidate(u64 y, u64 q, u64 n);

/// An order-finding problem (N, a, t) with Q = 2^t and the true order r.
class Instance {
 public:
  /// Validates and reduces `a` mod N. Throws DomainError when N < 2,
  /// gcd(a, N) != 1, or t is outside [1, kMaxPrecision].
  static Instance make(u64 modulus, u64 base, unsigned precision);

  static constexpr unsigned kMaxPrecision = 20;

  u64 modulus() const noexcept { return modulus_; }
  /// Base reduced mod N.
  u64 base() const noexcept { return base_; }
  unsigned precision() const noexcept { return precision_; }
  u64 register_size() const noexcept { return u64{1} << precision_; }
  u64 order() const noexcept { return order_; }
  bool degenerate() const noexcept { return order_ == 1; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  Instance(u64 modulus, u64 base, unsigned precision, u64 order)
      : modulus_(modulus), base_(base), precision_(precision), order_(order) {}

  u64 modulus_;
  u64 base_;
  unsigned precision_;
  u64 order_;
};

/// n such that N = 2^n - 1, or nullopt when N is not of that form.
std::optional<unsigned> mersenne_exponent(u64 modulus) noexcept;

/// Smallest h >= 0 with 2^h = a (mod N), if any.
std::optional<unsigned> shift_index(u64 a, u64 modulus);

}  // namespace ofrec::numtheory
