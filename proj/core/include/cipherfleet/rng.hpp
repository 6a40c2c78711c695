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
#ifndef CIPHERFLEET_RNG_HPP_
#define CIPHERFLEET_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "cipherfleet/bigint.hpp"

namespace cipherfleet {

// Deterministic random stream. mt19937_64 has a standardized bit stream, so
// identical seeds replay identical draws; all value mappings below are our
// own (std distributions are implementation-defined and would break replay).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound) by rejection on the top multiple of bound.
  std::uint64_t next_below(std::uint64_t bound);

  // Uniform over the canonical residues [0, q), arbitrary q >= 2.
  BigInt uniform_mod(const BigInt& q);

  // Uniform over the centered residues [-q/2, q/2).
  BigInt uniform_centered(const BigInt& q);

  double uniform_unit();  // [0, 1)

  // Uniform real in [lo, hi).
  double uniform_real(double lo, double hi);

  // Child stream with a seed derived from (seed, label); used to give each
  // agent / replicate an independent deterministic stream.
  Rng fork(std::uint64_t label) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Zero-mean discrete Gaussian truncated to |e| <= bound, sampled from a
// precomputed cumulative table (inversion sampling on 63 random bits).
class DiscreteGaussian {
 public:
  // sigma = bound / 3 keeps essentially all native mass inside the
  // truncation window; values beyond +-bound are assigned zero probability.
  explicit DiscreteGaussian(std::int64_t bound);

  std::int64_t bound() const { return bound_; }
  double sigma() const { return sigma_; }

  std::int64_t sample(Rng& rng) const;

 private:
  std::int64_t bound_;
  double sigma_;
  std::vector<std::uint64_t> cdt_;  // scaled CDF over [-bound, bound]
};

}  // namespace cipherfleet

#endif  // CIPHERFLEET_RNG_HPP_
