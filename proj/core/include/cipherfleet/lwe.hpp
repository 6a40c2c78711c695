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
// LWE cryptosystem over Z_q with q = L * p, both powers of 10.
//
// A message vector m (|m_i| < p/2) is encrypted row-wise as
//   [ (-A*sk + L*m + e) mod q , A ]
// and decrypted by the rounded inner product with s = [1, sk]. Homomorphic
// addition is entrywise addition mod q. Multiplication uses a second
// encryption Enc2(m1) = m1*R + O (R the base-10 gadget, O fresh encryptions
// of zero) together with base-10 digit decomposition of the multiplicand.
// All residues are stored centered, in [-q/2, q/2).
#ifndef CIPHERFLEET_LWE_HPP_
#define CIPHERFLEET_LWE_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "cipherfleet/bigint.hpp"
#include "cipherfleet/errors.hpp"
#include "cipherfleet/rng.hpp"

namespace cipherfleet {

// Cryptosystem configuration. p = 10^p_exp bounds plaintexts, L = 10^L_exp
// absorbs injected and accumulated error, q = L*p is the ciphertext modulus
// and digits = p_exp + L_exp is the base-10 length of q used by the gadget.
class CipherParams {
 public:
  CipherParams(int p_exp, int L_exp, int key_length, std::int64_t err_bound);

  int p_exp() const { return p_exp_; }
  int L_exp() const { return L_exp_; }
  int key_length() const { return key_length_; }
  std::int64_t err_bound() const { return err_bound_; }
  int digits() const { return p_exp_ + L_exp_; }

  const BigInt& p() const { return p_; }
  const BigInt& L() const { return L_; }
  const BigInt& q() const { return q_; }
  BigInt half_p() const { return p_ / 2; }
  BigInt half_q() const { return q_ / 2; }

  const DiscreteGaussian& error_sampler() const { return *error_sampler_; }

  bool operator==(const CipherParams& o) const {
    return p_exp_ == o.p_exp_ && L_exp_ == o.L_exp_ &&
           key_length_ == o.key_length_ && err_bound_ == o.err_bound_;
  }

 private:
  int p_exp_;
  int L_exp_;
  int key_length_;
  std::int64_t err_bound_;
  BigInt p_, L_, q_;
  std::shared_ptr<const DiscreteGaussian> error_sampler_;
};

struct SecretKey {
  std::vector<BigInt> sk;  // length N, centered residues

  // Extended key [1, sk], the decryption vector.
  std::vector<BigInt> s() const {
    std::vector<BigInt> out;
    out.reserve(sk.size() + 1);
    out.emplace_back(1);
    out.insert(out.end(), sk.begin(), sk.end());
    return out;
  }
};

// n x (N+1) matrix over Z_q, row-major. Column 0 is the body
// -A*sk + L*m + e, columns 1..N carry the randomness A.
struct Ciphertext {
  int rows = 0;
  int cols = 0;
  std::vector<BigInt> mat;

  BigInt& at(int r, int c) { return mat[static_cast<std::size_t>(r) * cols + c]; }
  const BigInt& at(int r, int c) const {
    return mat[static_cast<std::size_t>(r) * cols + c];
  }
};

// (digits*(N+1)) x (N+1) matrix: m1 * R + O, R the base-10 gadget and each
// row of O a fresh encryption of zero.
struct MultiplierCiphertext {
  int rows = 0;
  int cols = 0;
  std::vector<BigInt> mat;

  BigInt& at(int r, int c) { return mat[static_cast<std::size_t>(r) * cols + c]; }
  const BigInt& at(int r, int c) const {
    return mat[static_cast<std::size_t>(r) * cols + c];
  }
};

// Uniform secret key over Z_q^N, stored centered.
SecretKey keygen(const CipherParams& params, Rng& rng);

// Enc with explicit randomness: A is n x N (centered residues), e has one
// entry per message row. Exposed so tests can pin A = 0, e = 0; encrypt()
// forwards here after sampling.
Ciphertext encrypt_with(const CipherParams& params, const SecretKey& key,
                        const std::vector<BigInt>& m,
                        const std::vector<BigInt>& a_rows,
                        const std::vector<std::int64_t>& errs);

// Enc(m): A uniform over Z_q, e from the truncated discrete Gaussian.
// Throws MessageOutOfRange unless every |m_i| < p/2.
Ciphertext encrypt(const CipherParams& params, const SecretKey& key,
                   const std::vector<BigInt>& m, Rng& rng);

Ciphertext encrypt_scalar(const CipherParams& params, const SecretKey& key,
                          const BigInt& m, Rng& rng);

// Dec(ct) = round((ct * s mod q) / L), ties away from zero. Exact whenever
// the accumulated error is below L/2 per component; wraps silently otherwise
// (a property of the scheme, not a detected failure).
std::vector<BigInt> decrypt(const CipherParams& params, const SecretKey& key,
                            const Ciphertext& ct);

BigInt decrypt_scalar(const CipherParams& params, const SecretKey& key,
                      const Ciphertext& ct);

// Entrywise sum mod q. Decrypts to m1 + m2 while |m1 + m2| < p/2.
Ciphertext add_ct(const CipherParams& params, const Ciphertext& ct1,
                  const Ciphertext& ct2);

// Entrywise negation mod q; Dec(-ct) = -Dec(ct).
Ciphertext negate_ct(const CipherParams& params, const Ciphertext& ct);

// Entrywise k * ct mod q for a plaintext integer k; Dec = k * m, noise
// scales by |k|. Only for coefficients deliberately left unencrypted --
// an intercepted plaintext multiplier leaks controller structure.
Ciphertext mult_plain(const CipherParams& params, const Ciphertext& ct,
                      const BigInt& k);

// Enc2(m1) = m1 * R + O for a scalar multiplier.
MultiplierCiphertext encrypt_multiplier(const CipherParams& params,
                                        const SecretKey& key, const BigInt& m1,
                                        Rng& rng);

// Base-10 digits of one ciphertext row, digit-major: block i holds digit i
// of all N+1 components, so that decompose(c) * R == c (mod q). Digits are
// taken from the canonical non-negative representative in [0, q).
std::vector<std::uint8_t> decompose(const CipherParams& params,
                                    const std::vector<BigInt>& row);

// Enc2(m1) x_C Enc(m2): per message row, decompose(row) * mc.mat mod q.
// Decrypts to m1*m2 while |m1*m2| < p/2 and the noise budget holds.
Ciphertext mult_ct(const CipherParams& params, const MultiplierCiphertext& mc,
                   const Ciphertext& ct);

// Worst-case accumulated additive error after `steps` iterations, each
// consuming adds_per_step fresh encryptions and mults_per_step gadget
// multiplications: steps * (adds*r + mults*digits*(N+1)*9*r) with r the
// injected-error bound. Callers must keep this below L/2. The bound assumes
// multiplier magnitudes <= 1 in absolute value (true for the estimator and
// unit-gain coefficients); larger multipliers scale their operand's noise.
BigInt error_budget(const CipherParams& params, std::int64_t steps,
                    std::int64_t mults_per_step, std::int64_t adds_per_step);

}  // namespace cipherfleet

#endif  // CIPHERFLEET_LWE_HPP_
