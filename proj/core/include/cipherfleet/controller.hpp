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
// Dynamic controllers over integers and their fully encrypted counterparts.
//
// A linear controller x+ = Fx + Gy, u = Hx whose state matrix F is integer
// can run in ciphertext indefinitely: after scaling G, H and x0 to integers,
// every state update is additions and gadget multiplications mod q, so no
// significant-digit growth occurs and no state reset is ever needed. The
// mismatch estimator is the scalar instance x+ = x + (Ts*kappa/s1) * input.
#ifndef CIPHERFLEET_CONTROLLER_HPP_
#define CIPHERFLEET_CONTROLLER_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "cipherfleet/lwe.hpp"
#include "cipherfleet/quantizer.hpp"

namespace cipherfleet {

// Dense integer matrix, row-major.
struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<BigInt> v;

  static IntMatrix zero(int r, int c) {
    return {r, c, std::vector<BigInt>(static_cast<std::size_t>(r) * c)};
  }
  BigInt& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
  const BigInt& at(int r, int c) const {
    return v[static_cast<std::size_t>(r) * cols + c];
  }
};

// x+ = F x + round(G/s1) y,  u = round(H/s3) x,  x(0) = round(x0/(s1 s2)).
struct IntegerController {
  IntMatrix F;         // must be integer-valued by construction
  IntMatrix G_scaled;  // round(G / s1)
  IntMatrix H_scaled;  // round(H / s3)
  std::vector<BigInt> x0_scaled;
  Pow10Scale s1, s2, s3;
};

// Throws NonIntegerStateMatrix when F has a non-integer entry; scaling is
// reserved for G, H and x0, never applied to F.
IntegerController to_integer_controller(const Eigen::MatrixXd& F,
                                        const Eigen::MatrixXd& G,
                                        const Eigen::MatrixXd& H,
                                        const Eigen::VectorXd& x0,
                                        Pow10Scale s1, Pow10Scale s2,
                                        Pow10Scale s3);

// The controller with every coefficient Enc2-encrypted and the state held as
// ciphertexts. When H is the identity the output stage is skipped and the
// state is returned directly.
struct EncryptedController {
  CipherParams params;
  int state_dim = 0;
  int input_dim = 0;
  int output_dim = 0;
  bool identity_output = false;
  std::vector<MultiplierCiphertext> F_enc;  // state_dim x state_dim
  std::vector<MultiplierCiphertext> G_enc;  // state_dim x input_dim
  std::vector<MultiplierCiphertext> H_enc;  // output_dim x state_dim
  std::vector<Ciphertext> x_enc;            // scalar ciphertext per state
  std::int64_t step_count = 0;
  Pow10Scale s1, s2, s3;
};

EncryptedController encrypt_controller(const IntegerController& ic,
                                       const CipherParams& params,
                                       const SecretKey& key, Rng& rng);

// One update of the encrypted recursion. y_enc holds one scalar ciphertext
// per input; returns the encrypted output (the state itself when H = I).
std::vector<Ciphertext> step_encrypted(EncryptedController& ec,
                                       const std::vector<Ciphertext>& y_enc);

// Ts * kappa / s1 when that is an exact integer; NonIntegerCoefficient
// otherwise. s1 must be chosen so the product lands on an integer.
BigInt estimator_coeff(double kappa, double ts, Pow10Scale s1);

// Per-edge encrypted mismatch estimators. Each edge's state lives under its
// tail agent's key; stepping never decrypts. Coefficients are Enc2-encrypted
// by default; plain_coefficients keeps the structurally public 1 and
// Ts*kappa/s1 unencrypted and applies them as plaintext multipliers.
class EncryptedEstimatorBank {
 public:
  EncryptedEstimatorBank(const CipherParams& params, Pow10Scale s1,
                         Pow10Scale measurement_scale, double kappa, double ts,
                         bool plain_coefficients = false);

  // Registers edge k with state Enc(0) under the tail agent's key.
  void add_edge(int edge, const SecretKey& tail_key, Rng& rng);

  bool has_edge(int edge) const;
  int edge_count() const { return static_cast<int>(states_.size()); }
  const BigInt& coefficient() const { return coeff_; }
  Pow10Scale s1() const { return s1_; }
  Pow10Scale measurement_scale() const { return meas_scale_; }
  std::int64_t step_count(int edge) const;
  const Ciphertext& state(int edge) const;

  // xi <- Enc2(1) x_C xi (+) Enc2(Ts*kappa/s1) x_C Enc(diff). diff_enc must
  // be a scalar encryption of the uniformly quantized e_tail - mu_hat under
  // the edge's tail key.
  void step(int edge, const Ciphertext& diff_enc);

  // mu_hat = s1 * Dec(xi) / S_meas; caller must hold the tail agent's key.
  double read_mu_hat(int edge, const SecretKey& tail_key) const;

 private:
  struct EdgeSlot {
    Ciphertext xi;
    MultiplierCiphertext one_enc;
    MultiplierCiphertext coeff_enc;
    std::int64_t steps = 0;
  };

  const EdgeSlot& slot(int edge) const;

  CipherParams params_;
  Pow10Scale s1_;
  Pow10Scale meas_scale_;
  double kappa_;
  double ts_;
  BigInt coeff_;
  bool plain_coefficients_;
  std::vector<int> edge_ids_;
  std::vector<EdgeSlot> states_;
};

}  // namespace cipherfleet

#endif  // CIPHERFLEET_CONTROLLER_HPP_
