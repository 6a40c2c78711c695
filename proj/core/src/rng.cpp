/*
 * Copyright 2026 The Cipherfleet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "cipherfleet/rng.hpp"

#include <cmath>

namespace cipherfleet {

namespace {

// splitmix64; standard seed-derivation mix.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t Rng::next_below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

BigInt Rng::uniform_mod(const BigInt& q) {
  // Draw enough 64-bit words to cover q, reject values >= the largest
  // multiple of q that fits, then reduce.
  int words = 1;
  BigInt cap = BigInt(1) << 64;
  while (cap < q) {
    cap <<= 64;
    ++words;
  }
  const BigInt limit = cap - cap % q;
  BigInt v;
  do {
    v = 0;
    for (int i = 0; i < words; ++i) {
      v <<= 64;
      v += engine_();
    }
  } while (v >= limit);
  return v % q;
}

BigInt Rng::uniform_centered(const BigInt& q) {
  BigInt v = uniform_mod(q);
  if (v >= q / 2) v -= q;
  return v;
}

double Rng::uniform_unit() {
  // 53 random bits -> [0, 1) with full double resolution.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_real(double lo, double hi) {
  return lo + (hi - lo) * uniform_unit();
}

Rng Rng::fork(std::uint64_t label) const {
  return Rng(mix64(seed_ ^ mix64(label)));
}

DiscreteGaussian::DiscreteGaussian(std::int64_t bound)
    : bound_(bound), sigma_(static_cast<double>(bound) / 3.0) {
  // Tabulate the CDF of exp(-x^2 / 2 sigma^2) over x in [-bound, bound],
  // scaled to 2^63. bound = 0 degenerates to the constant zero sample.
  const std::size_t n = static_cast<std::size_t>(2 * bound_ + 1);
  std::vector<double> pdf(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(static_cast<std::int64_t>(i) - bound_);
    pdf[i] = bound_ == 0 ? 1.0 : std::exp(-(x * x) / (2.0 * sigma_ * sigma_));
    mass += pdf[i];
  }
  cdt_.resize(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += pdf[i] / mass;
    cdt_[i] = static_cast<std::uint64_t>(acc * 0x1.0p63);
  }
  cdt_.back() = static_cast<std::uint64_t>(1) << 63;  // exact top
}

std::int64_t DiscreteGaussian::sample(Rng& rng) const {
  const std::uint64_t u = rng.next_u64() >> 1;  // 63 bits
  std::size_t lo = 0, hi = cdt_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (cdt_[mid] <= u) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return static_cast<std::int64_t>(lo) - bound_;
}

}  // namespace cipherfleet
