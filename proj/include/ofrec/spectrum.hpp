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
#include <span>
#include <string>
#include <vector>

#include "ofrec/numtheory.hpp"

namespace ofrec::spectrum {

using numtheory::Instance;

inline constexpr double kNormTolerance = 1e-9;

/// Probability distribution over precision-register outcomes y in [0, 2^t).
/// Immutable once built; construction validates non-negativity and unit sum.
class Spectrum {
 public:
  static Spectrum from_probs(unsigned precision, std::vector<double> probs);
  static Spectrum uniform(unsigned precision);
  static Spectrum point_mass(unsigned precision, std::uint64_t y);

  unsigned precision() const noexcept { return precision_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t y) const { return probs_[y]; }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  Spectrum(unsigned precision, std::vector<double> probs)
      : precision_(precision), probs_(std::move(probs)) {}

  unsigned precision_ = 1;
  std::vector<double> probs_;
};

/// Finite-shot histogram. `to_spectrum()` divides every count by `shots`.
struct Counts {
  unsigned precision = 1;
  std::uint64_t shots = 0;
  std::vector<std::uint64_t> counts;

  Spectrum to_spectrum() const;
  friend bool operator==(const Counts&, const Counts&) = default;
};

/// Cyclically indexed broadening weights summing to one.
class Kernel {
 public:
  static Kernel from_weights(std::vector<double> weights);
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }

 private:
  explicit Kernel(std::vector<double> w) : weights_(std::move(w)) {}
  friend Kernel gaussian_kernel(std::size_t, double);
  friend Kernel box_kernel(std::size_t, double);
  std::vector<double> weights_;
};

enum class KernelFamily { kGaussian, kBox };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Wrapped discrete Gaussian, images |m| <= 3; sigma == 0 gives the delta.
Kernel gaussian_kernel(std::size_t size, double sigma);

/// Flat kernel over offsets -w..w with w = floor(sigma), clipped to the
/// register; sigma < 1 gives the delta.
Kernel box_kernel(std::size_t size, double sigma);

Kernel make_kernel(KernelFamily family, std::size_t size, double sigma);

/// Ideal phase-estimation output of the order-finding circuit: an equal
/// mixture over s = 0..r-1 of Fejer kernels centred at Q s / r. Exact
/// resonances (Q s / r integral) are placed analytically.
Spectrum ideal_spectrum(const Instance& instance);

/// Comb family of the shift sector h: the ideal spectrum for base 2^h mod N.
Spectrum sector_spectrum(std::uint64_t modulus, unsigned h, unsigned precision);

/// Circular convolution (p * K)(y) = sum_l p(y - l) K(l).
Spectrum broaden(const Spectrum& spec, const Kernel& kernel);

struct SectorTerm {
  unsigned h = 0;
  double nu = 0.0;
  double sigma = 0.0;
  friend bool operator==(const SectorTerm&, const SectorTerm&) = default;
};

struct NoiseConfig {
  double epsilon = 0.0;
  std::vector<SectorTerm> sectors;
  double sigma0 = 0.0;
  double lambda_uniform = 0.0;
  KernelFamily kernel = KernelFamily::kGaussian;
  std::optional<std::uint64_t> shots;  // nullopt: infinite shots
  std::uint64_t seed = 0;

  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

/// Throws DomainError if `cfg` is inconsistent with `instance`.
void validate(const NoiseConfig& cfg, const Instance& instance);

/// Every shift h in [0, n) of N = 2^n - 1 other than the intended one, with
/// uniform weights and a common width. Throws DomainError for non-Mersenne N.
std::vector<SectorTerm> all_shift_sectors(const Instance& instance, double sigma);

/// p = (1 - lambda) [ (1 - eps) (p_s * K_sigma0) + eps sum_h nu_h (p_h * K_sigma_h) ] + lambda u.
/// Terms sharing a kernel width are mixed before the convolution.
Spectrum noisy_mixture(const Instance& instance, const NoiseConfig& cfg);

/// Multinomial draw of `shots` outcomes; one mt19937_64 uniform per shot,
/// inverted through the cumulative distribution.
Counts sample_counts(const Spectrum& spec, std::uint64_t shots, std::uint64_t seed);

/// Empirical distribution counts / shots of `sample_counts`.
Spectrum sample_shots(const Spectrum& spec, std::uint64_t shots, std::uint64_t seed);

}  // namespace ofrec::spectrum
