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
#ifndef CIPHERFLEET_BIGINT_HPP_
#define CIPHERFLEET_BIGINT_HPP_

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace cipherfleet {

// Ciphertext-space values exceed 64 bits as soon as q = Lp does, and a single
// homomorphic multiplication peaks near (Lp)^2, so every Z_q quantity is kept
// in arbitrary precision.
using BigInt = boost::multiprecision::cpp_int;

// 10^e for e >= 0.
inline BigInt pow10(int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

// Centered residue of a modulo q: the unique value in [-q/2, q/2) congruent
// to a, i.e. a - floor((a + q/2)/q) * q.
inline BigInt mod_centered(const BigInt& a, const BigInt& q) {
  BigInt r = a % q;          // truncated remainder, sign follows a
  if (r < 0) r += q;         // canonical representative in [0, q)
  if (r >= q / 2) r -= q;
  return r;
}

// Canonical representative of a modulo q in [0, q).
inline BigInt mod_canonical(const BigInt& a, const BigInt& q) {
  BigInt r = a % q;
  if (r < 0) r += q;
  return r;
}

// Nearest integer, ties rounded away from zero. This is the rounding applied
// everywhere a scaled real value becomes a plaintext integer.
inline std::int64_t round_half_away(double v) {
  return static_cast<std::int64_t>(v >= 0 ? std::floor(v + 0.5)
                                          : std::ceil(v - 0.5));
}

// Rounded quotient n/d with ties away from zero, both args exact integers.
inline BigInt round_div_half_away(const BigInt& n, const BigInt& d) {
  BigInt num = 2 * n;
  if (n >= 0) {
    num += d;
  } else {
    num -= d;
  }
  return num / (2 * d);  // truncation toward zero gives half-away rounding
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

inline BigInt from_decimal(const std::string& s) { return BigInt(s); }

}  // namespace cipherfleet

#endif  // CIPHERFLEET_BIGINT_HPP_
