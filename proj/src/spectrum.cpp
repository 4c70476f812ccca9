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

#include "ofrec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "ofrec/errors.hpp"
#include "ofrec/kernels.hpp"
#include "ofrec/random.hpp"

namespace ofrec::spectrum {

using numtheory::u64;

namespace {

std::size_t register_size(unsigned precision) {
  if (precision < 1 || precision > Instance::kMaxPrecision) {
    throw DomainError("t=" + std::to_string(precision) + " outside [1, " +
                      std::to_string(Instance::kMaxPrecision) + "]");
  }
  return std::size_t{1} << precision;
}

void check_unit_sum(std::span<const double> w, const char* what) {
  double total = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) {
      throw DomainError(std::string(what) + ": entries must be finite and non-negative");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw DomainError(std::string(what) + ": entries sum to " + std::to_string(total) +
                      ", expected 1");
  }
}

// sin^2(pi * num / den) for 0 < num < den, folded onto the nearer half period.
double sin_squared_fraction(u64 num, u64 den) {
  const u64 folded = std::min(num, den - num);
  const double s = std::sin(std::numbers::pi * static_cast<double>(folded) / static_cast<double>(den));
  return s * s;
}

}  // namespace

Spectrum Spectrum::from_probs(unsigned precision, std::vector<double> probs) {
  if (probs.size() != register_size(precision)) {
    throw DomainError("spectrum of length " + std::to_string(probs.size()) +
                      " does not match Q=2^" + std::to_string(precision));
  }
  check_unit_sum(probs, "spectrum");
  return Spectrum(precision, std::move(probs));
}

Spectrum Spectrum::uniform(unsigned precision) {
  const std::size_t q = register_size(precision);
  return Spectrum(precision, std::vector<double>(q, 1.0 / static_cast<double>(q)));
}

Spectrum Spectrum::point_mass(unsigned precision, std::uint64_t y) {
  const std::size_t q = register_size(precision);
  if (y >= q) throw DomainError("point mass outcome outside the register");
  std::vector<double> p(q, 0.0);
  p[y] = 1.0;
  return Spectrum(precision, std::move(p));
}

Spectrum Counts::to_spectrum() const {
  if (shots == 0) throw DomainError("counts: shots must be positive");
  if (counts.size() != register_size(precision)) {
    throw DomainError("counts length does not match Q=2^" + std::to_string(precision));
  }
  const u64 total = std::accumulate(counts.begin(), counts.end(), u64{0});
  if (total != shots) {
    throw DomainError("counts sum to " + std::to_string(total) + " but shots=" +
                      std::to_string(shots));
  }
  std::vector<double> p(counts.size());
  const double denom = static_cast<double>(shots);
  for (std::size_t y = 0; y < counts.size(); ++y) {
    p[y] = static_cast<double>(counts[y]) / denom;
  }
  return Spectrum::from_probs(precision, std::move(p));
}

Kernel Kernel::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw DomainError("kernel must be non-empty");
  check_unit_sum(weights, "kernel");
  return Kernel(std::move(weights));
}

std::string to_string(KernelFamily family) {
  return family == KernelFamily::kGaussian ? "gaussian" : "box";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "gaussian") return KernelFamily::kGaussian;
  if (name == "box") return KernelFamily::kBox;
  throw DomainError("unknown kernel family '" + name + "' (expected gaussian or box)");
}

Kernel gaussian_kernel(std::size_t size, double sigma) {
  if (size == 0) throw DomainError("kernel size must be positive");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("kernel width must be finite and >= 0");
  }
  std::vector<double> w(size, 0.0);
  if (sigma == 0.0) {
    w[0] = 1.0;
    return Kernel(std::move(w));
  }
  const double q = static_cast<double>(size);
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  double total = 0.0;
  for (std::size_t l = 0; l < size; ++l) {
    double acc = 0.0;
    for (int m = -3; m <= 3; ++m) {
      const double d = static_cast<double>(l) + m * q;
      acc += std::exp(-d * d * inv_two_var);
    }
    w[l] = acc;
    total += acc;
  }
  for (double& x : w) x /= total;
  return Kernel(std::move(w));
}

Kernel box_kernel(std::size_t size, double sigma) {
  if (size == 0) throw DomainError("kernel size must be positive");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("kernel width must be finite and >= 0");
  }
  const auto half = static_cast<std::size_t>(std::floor(sigma));
  std::vector<double> w(size, 0.0);
  if (2 * half + 1 >= size) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(size));
    return Kernel(std::move(w));
  }
  const double v = 1.0 / static_cast<double>(2 * half + 1);
  w[0] = v;
  for (std::size_t l = 1; l <= half; ++l) {
    w[l] = v;
    w[size - l] = v;
  }
  return Kernel(std::move(w));
}

Kernel make_kernel(KernelFamily family, std::size_t size, double sigma) {
  return family == KernelFamily::kGaussian ? gaussian_kernel(size, sigma) : box_kernel(size, sigma);
}

Spectrum ideal_spectrum(const Instance& instance) {
  const u64 q = instance.register_size();
  const u64 r = instance.order();
  const u64 period = r * q;
  const double q2 = static_cast<double>(q) * static_cast<double>(q);
  std::vector<double> p(q, 0.0);
  double total = 0.0;
  for (u64 y = 0; y < q; ++y) {
    double acc = 0.0;
    for (u64 s = 0; s < r; ++s) {
      // Phase difference s/r - y/Q = num / (rQ), reduced into [0, rQ).
      const u64 num = (s * q + (period - (y * r) % period)) % period;
      if (num == 0) {
        acc += 1.0;
      } else if (num % r != 0) {
        acc += sin_squared_fraction(num % r, r) / (q2 * sin_squared_fraction(num, period));
      }
      // num % r == 0 with num != 0: Q times the phase is a non-zero integer, a
      // zero of the Fejer kernel.
    }
    p[y] = acc / static_cast<double>(r);
    total += p[y];
  }
  for (double& x : p) x /= total;
  return Spectrum::from_probs(instance.precision(), std::move(p));
}

Spectrum sector_spectrum(std::uint64_t modulus, unsigned h, unsigned precision) {
  if (modulus < 2) throw DomainError("N must be >= 2");
  const u64 base = numtheory::mod_pow(2, h, modulus);
  return ideal_spectrum(Instance::make(modulus, base, precision));
}

Spectrum broaden(const Spectrum& spec, const Kernel& kernel) {
  if (spec.size() != kernel.size()) {
    throw DomainError("broaden: spectrum length " + std::to_string(spec.size()) +
                      " != kernel length " + std::to_string(kernel.size()));
  }
  std::vector<double> out(spec.size());
  kernels::circular_convolve(spec.probs(), kernel.weights(), out);
  return Spectrum::from_probs(spec.precision(), std::move(out));
}

void validate(const NoiseConfig& cfg, const Instance& instance) {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(cfg.epsilon)) throw DomainError("epsilon must lie in [0, 1]");
  if (!unit(cfg.lambda_uniform)) throw DomainError("lambda must lie in [0, 1]");
  if (!(cfg.sigma0 >= 0.0) || !std::isfinite(cfg.sigma0)) {
    throw DomainError("sigma0 must be finite and >= 0");
  }
  if (cfg.shots && *cfg.shots == 0) throw DomainError("shots must be positive");
  double nu_total = 0.0;
  for (const auto& sec : cfg.sectors) {
    if (!(sec.nu >= 0.0) || !std::isfinite(sec.nu)) {
      throw DomainError("sector weights must be finite and >= 0");
    }
    if (!(sec.sigma >= 0.0) || !std::isfinite(sec.sigma)) {
      throw DomainError("sector widths must be finite and >= 0");
    }
    const u64 base = numtheory::mod_pow(2, sec.h, instance.modulus());
    if (numtheory::gcd(base, instance.modulus()) != 1) {
      throw DomainError("sector h=" + std::to_string(sec.h) + " gives a base not coprime to N");
    }
    if (base == instance.base()) {
      throw DomainError("sector h=" + std::to_string(sec.h) + " is the intended sector");
    }
    nu_total += sec.nu;
  }
  if (!cfg.sectors.empty() && std::abs(nu_total - 1.0) > kNormTolerance) {
    throw DomainError("sector weights sum to " + std::to_string(nu_total) + ", expected 1");
  }
  if (cfg.epsilon > 0.0 && cfg.sectors.empty()) {
    throw DomainError("epsilon > 0 requires at least one competing sector");
  }
}

std::vector<SectorTerm> all_shift_sectors(const Instance& instance, double sigma) {
  const auto n = numtheory::mersenne_exponent(instance.modulus());
  if (!n) {
    throw DomainError("default sector set needs N = 2^n - 1, got N=" +
                      std::to_string(instance.modulus()));
  }
  std::vector<unsigned> hs;
  for (unsigned h = 0; h < *n; ++h) {
    if (numtheory::mod_pow(2, h, instance.modulus()) != instance.base()) hs.push_back(h);
  }
  std::vector<SectorTerm> out;
  for (unsigned h : hs) out.push_back({h, 1.0 / static_cast<double>(hs.size()), sigma});
  return out;
}

Spectrum noisy_mixture(const Instance& instance, const NoiseConfig& cfg) {
  validate(cfg, instance);
  const std::size_t q = instance.register_size();
  const unsigned t = instance.precision();

  // Pre-broadening mixtures keyed by kernel width, accumulated in term order.
  std::map<double, std::vector<double>> by_width;
  auto add_term = [&](double weight, double sigma, const Spectrum& comb) {
    if (weight == 0.0) return;
    auto [it, inserted] = by_width.try_emplace(sigma, q, 0.0);
    auto& acc = it->second;
    for (std::size_t y = 0; y < q; ++y) acc[y] += weight * comb[y];
  };
  add_term(1.0 - cfg.epsilon, cfg.sigma0, ideal_spectrum(instance));
  if (cfg.epsilon > 0.0) {
    for (const auto& sec : cfg.sectors) {
      if (sec.nu == 0.0) continue;
      add_term(cfg.epsilon * sec.nu, sec.sigma, sector_spectrum(instance.modulus(), sec.h, t));
    }
  }

  std::vector<double> mixed(q, 0.0);
  std::vector<double> scratch(q);
  for (const auto& [sigma, acc] : by_width) {
    const Kernel k = make_kernel(cfg.kernel, q, sigma);
    kernels::circular_convolve(acc, k.weights(), scratch);
    for (std::size_t y = 0; y < q; ++y) mixed[y] += scratch[y];
  }

  const double lam = cfg.lambda_uniform;
  if (lam != 0.0) {
    const double floor = lam / static_cast<double>(q);
    for (double& x : mixed) x = (1.0 - lam) * x + floor;
  }
  return Spectrum::from_probs(t, std::move(mixed));
}

Counts sample_counts(const Spectrum& spec, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw DomainError("shots must be positive");
  const auto p = spec.probs();
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  // Rounding can leave trailing zero-probability outcomes with cdf equal to
  // the total; the upper bound below never lands on them.
  const double total = cdf.back();
  Rng rng(seed);
  Counts out{spec.precision(), shots, std::vector<std::uint64_t>(p.size(), 0)};
  for (std::uint64_t i = 0; i < shots; ++i) {
    const double u = rng.uniform01() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    auto y = static_cast<std::size_t>(it - cdf.begin());
    if (it == cdf.end()) {
      y = p.size() - 1;
      while (y > 0 && p[y] == 0.0) --y;
    }
    ++out.counts[y];
  }
  return out;
}

Spectrum sample_shots(const Spectrum& spec, std::uint64_t shots, std::uint64_t seed) {
  return sample_counts(spec, shots, seed).to_spectrum();
}

}  // namespace ofrec::spectrum
