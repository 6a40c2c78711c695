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
#include "cipherfleet/controller.hpp"

#include <algorithm>
#include <cmath>

namespace cipherfleet {

namespace {

constexpr double kIntegerTol = 1e-9;

BigInt round_to_integer_checked(double v, const char* what) {
  const double r = std::nearbyint(v);
  if (std::fabs(v - r) > kIntegerTol * std::max(1.0, std::fabs(v))) {
    throw NonIntegerCoefficient(std::string(what) + " is not an integer");
  }
  return BigInt(static_cast<long long>(r));
}

IntMatrix scale_matrix(const Eigen::MatrixXd& m, Pow10Scale s) {
  IntMatrix out = IntMatrix::zero(static_cast<int>(m.rows()),
                                  static_cast<int>(m.cols()));
  for (int i = 0; i < out.rows; ++i) {
    for (int j = 0; j < out.cols; ++j) {
      out.at(i, j) = quantize_at(m(i, j), Pow10Scale{-s.exp});
    }
  }
  return out;
}

}  // namespace

IntegerController to_integer_controller(const Eigen::MatrixXd& F,
                                        const Eigen::MatrixXd& G,
                                        const Eigen::MatrixXd& H,
                                        const Eigen::VectorXd& x0,
                                        Pow10Scale s1, Pow10Scale s2,
                                        Pow10Scale s3) {
  IntegerController ic;
  ic.F = IntMatrix::zero(static_cast<int>(F.rows()),
                         static_cast<int>(F.cols()));
  for (int i = 0; i < ic.F.rows; ++i) {
    for (int j = 0; j < ic.F.cols; ++j) {
      const double v = F(i, j);
      if (std::fabs(v - std::nearbyint(v)) >
          kIntegerTol * std::max(1.0, std::fabs(v))) {
        throw NonIntegerStateMatrix("state matrix entry " + std::to_string(v) +
                                    " is not an integer");
      }
      ic.F.at(i, j) = BigInt(static_cast<long long>(std::nearbyint(v)));
    }
  }
  ic.G_scaled = scale_matrix(G, s1);
  ic.H_scaled = scale_matrix(H, s3);
  ic.x0_scaled.reserve(x0.size());
  for (int i = 0; i < x0.size(); ++i) {
    ic.x0_scaled.push_back(
        quantize_at(x0(i), Pow10Scale{-(s1.exp + s2.exp)}));
  }
  ic.s1 = s1;
  ic.s2 = s2;
  ic.s3 = s3;
  return ic;
}

EncryptedController encrypt_controller(const IntegerController& ic,
                                       const CipherParams& params,
                                       const SecretKey& key, Rng& rng) {
  EncryptedController ec{params};
  ec.state_dim = ic.F.rows;
  ec.input_dim = ic.G_scaled.cols;
  ec.output_dim = ic.H_scaled.rows;
  ec.s1 = ic.s1;
  ec.s2 = ic.s2;
  ec.s3 = ic.s3;

  // H = I lets the output stage be skipped entirely (the state is the
  // output), saving one multiplication layer per step.
  ec.identity_output = ic.H_scaled.rows == ic.H_scaled.cols;
  if (ec.identity_output) {
    for (int i = 0; i < ic.H_scaled.rows && ec.identity_output; ++i) {
      for (int j = 0; j < ic.H_scaled.cols; ++j) {
        if (ic.H_scaled.at(i, j) != (i == j ? 1 : 0)) {
          ec.identity_output = false;
          break;
        }
      }
    }
  }

  for (const BigInt& f : ic.F.v) {
    ec.F_enc.push_back(encrypt_multiplier(params, key, f, rng));
  }
  for (const BigInt& g : ic.G_scaled.v) {
    ec.G_enc.push_back(encrypt_multiplier(params, key, g, rng));
  }
  if (!ec.identity_output) {
    for (const BigInt& h : ic.H_scaled.v) {
      ec.H_enc.push_back(encrypt_multiplier(params, key, h, rng));
    }
  }
  for (const BigInt& x : ic.x0_scaled) {
    ec.x_enc.push_back(encrypt(params, key, {x}, rng));
  }
  return ec;
}

std::vector<Ciphertext> step_encrypted(EncryptedController& ec,
                                       const std::vector<Ciphertext>& y_enc) {
  if (static_cast<int>(y_enc.size()) != ec.input_dim) {
    throw DimensionMismatch("controller input dimension mismatch");
  }
  const int n = ec.state_dim;
  std::vector<Ciphertext> next(n);
  for (int i = 0; i < n; ++i) {
    Ciphertext acc =
        mult_ct(ec.params, ec.F_enc[static_cast<std::size_t>(i) * n], ec.x_enc[0]);
    for (int j = 1; j < n; ++j) {
      acc = add_ct(ec.params, acc,
                   mult_ct(ec.params,
                           ec.F_enc[static_cast<std::size_t>(i) * n + j],
                           ec.x_enc[j]));
    }
    for (int j = 0; j < ec.input_dim; ++j) {
      acc = add_ct(
          ec.params, acc,
          mult_ct(ec.params,
                  ec.G_enc[static_cast<std::size_t>(i) * ec.input_dim + j],
                  y_enc[j]));
    }
    next[i] = std::move(acc);
  }
  ec.x_enc = std::move(next);
  ++ec.step_count;

  if (ec.identity_output) {
    return ec.x_enc;
  }
  std::vector<Ciphertext> u(ec.output_dim);
  for (int i = 0; i < ec.output_dim; ++i) {
    Ciphertext acc =
        mult_ct(ec.params, ec.H_enc[static_cast<std::size_t>(i) * n], ec.x_enc[0]);
    for (int j = 1; j < n; ++j) {
      acc = add_ct(ec.params, acc,
                   mult_ct(ec.params,
                           ec.H_enc[static_cast<std::size_t>(i) * n + j],
                           ec.x_enc[j]));
    }
    u[i] = std::move(acc);
  }
  return u;
}

BigInt estimator_coeff(double kappa, double ts, Pow10Scale s1) {
  const long double exact = static_cast<long double>(ts) *
                            static_cast<long double>(kappa) *
                            std::pow(10.0L, -s1.exp);
  return round_to_integer_checked(static_cast<double>(exact),
                                  "Ts * kappa / s1");
}

EncryptedEstimatorBank::EncryptedEstimatorBank(const CipherParams& params,
                                               Pow10Scale s1,
                                               Pow10Scale measurement_scale,
                                               double kappa, double ts,
                                               bool plain_coefficients)
    : params_(params),
      s1_(s1),
      meas_scale_(measurement_scale),
      kappa_(kappa),
      ts_(ts),
      coeff_(estimator_coeff(kappa, ts, s1)),
      plain_coefficients_(plain_coefficients) {}

void EncryptedEstimatorBank::add_edge(int edge, const SecretKey& tail_key,
                                      Rng& rng) {
  EdgeSlot slot;
  slot.xi = encrypt(params_, tail_key, {BigInt(0)}, rng);
  if (!plain_coefficients_) {
    slot.one_enc = encrypt_multiplier(params_, tail_key, BigInt(1), rng);
    slot.coeff_enc = encrypt_multiplier(params_, tail_key, coeff_, rng);
  }
  edge_ids_.push_back(edge);
  states_.push_back(std::move(slot));
}

bool EncryptedEstimatorBank::has_edge(int edge) const {
  return std::find(edge_ids_.begin(), edge_ids_.end(), edge) !=
         edge_ids_.end();
}

const EncryptedEstimatorBank::EdgeSlot& EncryptedEstimatorBank::slot(
    int edge) const {
  const auto it = std::find(edge_ids_.begin(), edge_ids_.end(), edge);
  if (it == edge_ids_.end()) {
    throw UnknownEdge("no estimator registered for edge " +
                      std::to_string(edge));
  }
  return states_[static_cast<std::size_t>(it - edge_ids_.begin())];
}

std::int64_t EncryptedEstimatorBank::step_count(int edge) const {
  return slot(edge).steps;
}

const Ciphertext& EncryptedEstimatorBank::state(int edge) const {
  return slot(edge).xi;
}

void EncryptedEstimatorBank::step(int edge, const Ciphertext& diff_enc) {
  const auto it = std::find(edge_ids_.begin(), edge_ids_.end(), edge);
  if (it == edge_ids_.end()) {
    throw UnknownEdge("no estimator registered for edge " +
                      std::to_string(edge));
  }
  EdgeSlot& s = states_[static_cast<std::size_t>(it - edge_ids_.begin())];
  if (plain_coefficients_) {
    s.xi = add_ct(params_, s.xi, mult_plain(params_, diff_enc, coeff_));
  } else {
    s.xi = add_ct(params_, mult_ct(params_, s.one_enc, s.xi),
                  mult_ct(params_, s.coeff_enc, diff_enc));
  }
  ++s.steps;
}

double EncryptedEstimatorBank::read_mu_hat(int edge,
                                           const SecretKey& tail_key) const {
  const BigInt xi = decrypt_scalar(params_, tail_key, slot(edge).xi);
  return dequantize(xi, Pow10Scale{meas_scale_.exp - s1_.exp});
}

}  // namespace cipherfleet
