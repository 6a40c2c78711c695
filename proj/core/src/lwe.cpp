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
#include "cipherfleet/lwe.hpp"

#include <string>
#include <utility>

namespace cipherfleet {

CipherParams::CipherParams(int p_exp, int L_exp, int key_length,
                           std::int64_t err_bound)
    : p_exp_(p_exp),
      L_exp_(L_exp),
      key_length_(key_length),
      err_bound_(err_bound),
      p_(pow10(p_exp)),
      L_(pow10(L_exp)),
      q_(pow10(p_exp + L_exp)),
      error_sampler_(std::make_shared<DiscreteGaussian>(err_bound)) {
  if (p_exp < 1 || L_exp < 1) {
    throw ValidationError("p and L must be positive powers of 10");
  }
  if (key_length < 1) {
    throw ValidationError("key length N must be >= 1");
  }
  if (err_bound < 0 || BigInt(err_bound) >= L_ / 2) {
    throw ValidationError(
        "err_bound must satisfy 0 <= err_bound < L/2 for decryption "
        "correctness");
  }
}

SecretKey keygen(const CipherParams& params, Rng& rng) {
  SecretKey key;
  key.sk.reserve(params.key_length());
  for (int i = 0; i < params.key_length(); ++i) {
    key.sk.push_back(rng.uniform_centered(params.q()));
  }
  return key;
}

Ciphertext encrypt_with(const CipherParams& params, const SecretKey& key,
                        const std::vector<BigInt>& m,
                        const std::vector<BigInt>& a_rows,
                        const std::vector<std::int64_t>& errs) {
  const int n = static_cast<int>(m.size());
  const int N = params.key_length();
  if (static_cast<int>(a_rows.size()) != n * N ||
      static_cast<int>(errs.size()) != n) {
    throw DimensionMismatch("randomness shape does not match message");
  }
  const BigInt half_p = params.half_p();
  for (const BigInt& mi : m) {
    if (mi >= half_p || mi < -half_p) {
      throw MessageOutOfRange("plaintext component " + mi.str() +
                              " outside [-p/2, p/2)");
    }
  }
  Ciphertext ct;
  ct.rows = n;
  ct.cols = N + 1;
  ct.mat.resize(static_cast<std::size_t>(n) * (N + 1));
  for (int i = 0; i < n; ++i) {
    BigInt body = params.L() * m[i] + errs[i];
    for (int j = 0; j < N; ++j) {
      const BigInt& a = a_rows[static_cast<std::size_t>(i) * N + j];
      body -= a * key.sk[j];
      ct.at(i, j + 1) = a;
    }
    ct.at(i, 0) = mod_centered(body, params.q());
  }
  return ct;
}

Ciphertext encrypt(const CipherParams& params, const SecretKey& key,
                   const std::vector<BigInt>& m, Rng& rng) {
  const int n = static_cast<int>(m.size());
  const int N = params.key_length();
  std::vector<BigInt> a_rows;
  a_rows.reserve(static_cast<std::size_t>(n) * N);
  for (int i = 0; i < n * N; ++i) {
    a_rows.push_back(rng.uniform_centered(params.q()));
  }
  std::vector<std::int64_t> errs;
  errs.reserve(n);
  for (int i = 0; i < n; ++i) {
    errs.push_back(params.error_sampler().sample(rng));
  }
  return encrypt_with(params, key, m, a_rows, errs);
}

Ciphertext encrypt_scalar(const CipherParams& params, const SecretKey& key,
                          const BigInt& m, Rng& rng) {
  return encrypt(params, key, {m}, rng);
}

std::vector<BigInt> decrypt(const CipherParams& params, const SecretKey& key,
                            const Ciphertext& ct) {
  if (ct.cols != params.key_length() + 1) {
    throw DimensionMismatch("ciphertext width does not match key length");
  }
  std::vector<BigInt> out;
  out.reserve(ct.rows);
  for (int i = 0; i < ct.rows; ++i) {
    BigInt acc = ct.at(i, 0);  // s[0] = 1
    for (int j = 1; j < ct.cols; ++j) {
      acc += ct.at(i, j) * key.sk[j - 1];
    }
    out.push_back(round_div_half_away(mod_centered(acc, params.q()),
                                      params.L()));
  }
  return out;
}

BigInt decrypt_scalar(const CipherParams& params, const SecretKey& key,
                      const Ciphertext& ct) {
  if (ct.rows != 1) {
    throw DimensionMismatch("decrypt_scalar expects a single-row ciphertext");
  }
  return decrypt(params, key, ct)[0];
}

Ciphertext add_ct(const CipherParams& params, const Ciphertext& ct1,
                  const Ciphertext& ct2) {
  if (ct1.rows != ct2.rows || ct1.cols != ct2.cols) {
    throw DimensionMismatch("ciphertext dimensions differ in add_ct");
  }
  Ciphertext out = ct1;
  for (std::size_t i = 0; i < out.mat.size(); ++i) {
    out.mat[i] = mod_centered(out.mat[i] + ct2.mat[i], params.q());
  }
  return out;
}

Ciphertext negate_ct(const CipherParams& params, const Ciphertext& ct) {
  Ciphertext out = ct;
  for (BigInt& v : out.mat) {
    v = mod_centered(-v, params.q());
  }
  return out;
}

Ciphertext mult_plain(const CipherParams& params, const Ciphertext& ct,
                      const BigInt& k) {
  Ciphertext out = ct;
  for (BigInt& v : out.mat) {
    v = mod_centered(v * k, params.q());
  }
  return out;
}

MultiplierCiphertext encrypt_multiplier(const CipherParams& params,
                                        const SecretKey& key, const BigInt& m1,
                                        Rng& rng) {
  if (m1 >= params.half_p() || m1 < -params.half_p()) {
    throw MessageOutOfRange("multiplier " + m1.str() + " outside [-p/2, p/2)");
  }
  const int N = params.key_length();
  const int d = params.digits();
  MultiplierCiphertext mc;
  mc.rows = d * (N + 1);
  mc.cols = N + 1;
  mc.mat.resize(static_cast<std::size_t>(mc.rows) * mc.cols);
  const std::vector<BigInt> zero{BigInt(0)};
  BigInt power = 1;  // 10^i
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= N; ++j) {
      const int r = i * (N + 1) + j;
      // Row of O: a fresh encryption of the scalar zero.
      const Ciphertext o = encrypt(params, key, zero, rng);
      for (int c = 0; c <= N; ++c) {
        mc.at(r, c) = o.at(0, c);
      }
      // Row of m1 * R: m1 * 10^i at column j.
      mc.at(r, j) = mod_centered(mc.at(r, j) + m1 * power, params.q());
    }
    power *= 10;
  }
  return mc;
}

std::vector<std::uint8_t> decompose(const CipherParams& params,
                                    const std::vector<BigInt>& row) {
  const int N = params.key_length();
  const int d = params.digits();
  if (static_cast<int>(row.size()) != N + 1) {
    throw DimensionMismatch("decompose expects a row of N+1 components");
  }
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(d) * (N + 1));
  for (int j = 0; j <= N; ++j) {
    BigInt v = mod_canonical(row[j], params.q());
    for (int i = 0; i < d && v != 0; ++i) {
      digits[static_cast<std::size_t>(i) * (N + 1) + j] =
          static_cast<std::uint8_t>(static_cast<unsigned>(v % 10));
      v /= 10;
    }
  }
  return digits;
}

Ciphertext mult_ct(const CipherParams& params, const MultiplierCiphertext& mc,
                   const Ciphertext& ct) {
  const int N = params.key_length();
  const int d = params.digits();
  if (ct.cols != N + 1 || mc.cols != N + 1 || mc.rows != d * (N + 1)) {
    throw DimensionMismatch("multiplier/ciphertext shapes incompatible");
  }
  Ciphertext out;
  out.rows = ct.rows;
  out.cols = N + 1;
  out.mat.resize(static_cast<std::size_t>(out.rows) * out.cols);
  std::vector<BigInt> row(N + 1);
  std::vector<BigInt> acc(N + 1);
  for (int i = 0; i < ct.rows; ++i) {
    for (int c = 0; c <= N; ++c) {
      row[c] = ct.at(i, c);
      acc[c] = 0;
    }
    const std::vector<std::uint8_t> digits = decompose(params, row);
    for (int r = 0; r < mc.rows; ++r) {
      const unsigned dig = digits[r];
      if (dig == 0) continue;
      const BigInt* mrow = &mc.mat[static_cast<std::size_t>(r) * mc.cols];
      for (int c = 0; c <= N; ++c) {
        acc[c] += dig * mrow[c];
      }
    }
    for (int c = 0; c <= N; ++c) {
      out.at(i, c) = mod_centered(acc[c], params.q());
    }
  }
  return out;
}

BigInt error_budget(const CipherParams& params, std::int64_t steps,
                    std::int64_t mults_per_step, std::int64_t adds_per_step) {
  if (steps < 0 || mults_per_step < 0 || adds_per_step < 0) {
    throw ValidationError("error_budget counts must be non-negative");
  }
  const BigInt r = params.err_bound();
  const BigInt per_mult =
      BigInt(params.digits()) * (params.key_length() + 1) * 9 * r;
  return BigInt(steps) * (BigInt(adds_per_step) * r +
                          BigInt(mults_per_step) * per_mult);
}

}  // namespace cipherfleet
