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
#include "cipherfleet/quantizer.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace cipherfleet {

namespace {

long double pow10l(int e) {
  return std::pow(10.0L, static_cast<long double>(e));
}

// round(v * 10^exp) with ties away from zero, in extended precision.
BigInt scaled_round(double v, int exp) {
  const long double scaled = static_cast<long double>(v) * pow10l(exp);
  const long double r =
      scaled >= 0 ? std::floor(scaled + 0.5L) : std::ceil(scaled - 0.5L);
  // Magnitudes stay far below 2^63 for any sane sp; guard anyway.
  if (r > 9.0e18L || r < -9.0e18L) {
    throw PlaintextOverflow("quantized magnitude exceeds 64-bit range");
  }
  return BigInt(static_cast<long long>(r));
}

}  // namespace

double Pow10Scale::value() const {
  return static_cast<double>(pow10l(exp));
}

int floor_log10_abs(double v) {
  // 17 significant digits can never carry across a decade, so the printed
  // exponent is exactly floor(log10|v|).
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.16e", std::fabs(v));
  const char* e = std::strchr(buf, 'e');
  return std::atoi(e + 1);
}

Pow10Scale log_scale_factor(double v, int sp) {
  if (v == 0.0) {
    throw ZeroInput("log scale factor undefined at v = 0");
  }
  return Pow10Scale{sp - floor_log10_abs(v) - 1};
}

Pow10Scale log_scale_factor(double v, const LogQuantizerSpec& spec) {
  return log_scale_factor(v, spec.sp);
}

Quantized quantize_log(double v, int sp) {
  if (v == 0.0) {
    return {BigInt(0), Pow10Scale{0}};
  }
  const Pow10Scale s = log_scale_factor(v, sp);
  return {scaled_round(v, s.exp), s};
}

Quantized quantize_log(double v, const LogQuantizerSpec& spec) {
  return quantize_log(v, spec.sp);
}

BigInt quantize_at(double v, Pow10Scale scale) {
  return scaled_round(v, scale.exp);
}

double dequantize(const BigInt& m, Pow10Scale scale) {
  return static_cast<double>(static_cast<long double>(m) *
                             pow10l(-scale.exp));
}

BigInt quantize_uniform(double v, const UniformQuantizerSpec& spec,
                        const BigInt& half_p) {
  BigInt m = scaled_round(v, spec.scale.exp);
  if (m >= half_p || m < -half_p) {
    throw PlaintextOverflow("uniformly quantized value " + m.str() +
                            " outside [-p/2, p/2)");
  }
  return m;
}

BigInt min_plaintext_bound(const std::vector<int>& mult_sps,
                           const std::vector<int>& add_sps) {
  BigInt prod = 1;
  for (int sp : mult_sps) prod *= pow10(2 * sp);
  BigInt sum = 0;
  for (int sp : add_sps) sum += pow10(sp);
  return prod + 2 * sum;
}

}  // namespace cipherfleet
