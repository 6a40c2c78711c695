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
//
// Scaled quantization between real signals and the integer plaintext space.
//
// The logarithmic quantizer picks a power-of-10 scale from the signal's
// magnitude so a fixed count of significant figures survives; the uniform
// quantizer applies one fixed scale. Scales are carried as exponents, never
// as floats, so rescaling after decryption is exact.
#ifndef CIPHERFLEET_QUANTIZER_HPP_
#define CIPHERFLEET_QUANTIZER_HPP_

#include <vector>

#include "cipherfleet/bigint.hpp"
#include "cipherfleet/errors.hpp"

namespace cipherfleet {

// Exact power-of-10 scale factor, S = 10^exp.
struct Pow10Scale {
  int exp = 0;

  double value() const;
  bool operator==(const Pow10Scale&) const = default;
};

struct LogQuantizerSpec {
  int sp = 3;  // significant figures kept; nonzero inputs quantize into
               // [10^(sp-1), 10^sp]
};

struct UniformQuantizerSpec {
  Pow10Scale scale;  // the fixed S
};

// floor(log10(|v|)) computed from the decimal representation, immune to the
// usual log10 rounding at decade boundaries.
int floor_log10_abs(double v);

// S = 10^(sp - floor(log10|v|) - 1). Throws ZeroInput for v = 0 (the
// quantizer maps zero separately).
Pow10Scale log_scale_factor(double v, int sp);
Pow10Scale log_scale_factor(double v, const LogQuantizerSpec& spec);

struct Quantized {
  BigInt value;
  Pow10Scale scale;
};

// round(S*v) with S from log_scale_factor; v = 0 maps to (0, 10^0).
Quantized quantize_log(double v, int sp);
Quantized quantize_log(double v, const LogQuantizerSpec& spec);

// round(S*v) at a caller-fixed scale (used when several signals must share
// one scale so their ciphertexts can be summed).
BigInt quantize_at(double v, Pow10Scale scale);

double dequantize(const BigInt& m, Pow10Scale scale);

// round(S*v) under the uniform spec; throws PlaintextOverflow when the
// result leaves [-half_p, half_p).
BigInt quantize_uniform(double v, const UniformQuantizerSpec& spec,
                        const BigInt& half_p);

// Conservative lower bound on the plaintext modulus for a program that
// multiplies variables with the given significant-figure counts and adds the
// listed others: prod 10^(2*sp_i) + 2 * sum 10^(sp_j). Callers pick p as the
// next power of 10 strictly above.
BigInt min_plaintext_bound(const std::vector<int>& mult_sps,
                           const std::vector<int>& add_sps);

}  // namespace cipherfleet

#endif  // CIPHERFLEET_QUANTIZER_HPP_
