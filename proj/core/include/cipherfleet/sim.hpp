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
// Deterministic closed-loop simulator for encrypted formation control.
//
// Per tick, each agent measures its incident edges, forms the per-edge
// gradient and mismatch-correction terms and the estimator input
// e_tail - mu_hat in plaintext, quantizes them (logarithmic scale shared
// across each agent's group so the edge can sum ciphertexts; fixed uniform
// scale on the estimator path), encrypts under its own key and ships the
// payload. The edge holds no keys: it multiplies by the static Enc2 gains,
// sums over incident edges, steps the estimator recursion in ciphertext and
// returns the encrypted results. Agents decrypt, rescale by the public
// power-of-10 scales, and integrate.
//
// Every encrypted run carries a plaintext integer shadow that replays the
// same quantized-integer arithmetic; decrypted values are checked against it
// step by step, which is exactly the scheme's exactness claim.
#ifndef CIPHERFLEET_SIM_HPP_
#define CIPHERFLEET_SIM_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cipherfleet/controller.hpp"
#include "cipherfleet/formation.hpp"
#include "cipherfleet/scenario.hpp"

namespace cipherfleet {

// One quantized, encrypted planar term belonging to an edge. Both
// coordinates are scalar ciphertexts at the stated scale.
struct EncryptedTerm {
  int edge = -1;
  Pow10Scale scale;
  Ciphertext x, y;
};

struct EstimatorInput {
  int edge = -1;
  Pow10Scale scale;  // must match the bank's measurement scale
  Ciphertext diff;
};

// Everything one agent sends to the edge in one tick. grad_terms carries one
// term per incident edge at the shared grad_scale; comp_terms one term per
// owned (tail) edge at comp_scale.
struct AgentPayload {
  int agent = -1;
  Pow10Scale grad_scale;
  std::vector<EncryptedTerm> grad_terms;
  Pow10Scale comp_scale;
  std::vector<EncryptedTerm> comp_terms;
  std::vector<EstimatorInput> estimator_inputs;
};

// The same tick's quantized integers, kept on the agent/simulator side as
// the plaintext oracle. Never handed to the edge.
struct AgentShadow {
  std::vector<std::pair<BigInt, BigInt>> grad_ints;  // per incident edge
  std::vector<std::pair<BigInt, BigInt>> comp_ints;  // per owned edge
  std::vector<BigInt> diff_ints;                     // per owned edge
};

// Edge results for one agent: the two encrypted control addends (gradient
// and mismatch-correction paths, separately scaled) and the updated
// estimator state per owned edge.
struct AgentOutputs {
  int agent = -1;
  Pow10Scale grad_scale;
  Ciphertext u_grad_x, u_grad_y;
  bool has_comp = false;
  Pow10Scale comp_scale;
  Ciphertext u_comp_x, u_comp_y;
  std::vector<std::pair<int, Ciphertext>> xi_states;
};

struct DecryptedControl {
  Eigen::Vector2d u;                     // rescaled control contribution sum
  BigInt u_grad_x_int, u_grad_y_int;     // decrypted integers (oracle checks)
  BigInt u_comp_x_int, u_comp_y_int;
  std::vector<std::pair<int, BigInt>> xi_ints;
};

// Agent side of the dataflow. Owns the secret key; the key never leaves
// this object -- encryption, decryption and estimator registration all
// happen through member functions.
class AgentEndpoint {
 public:
  AgentEndpoint(int id, const CipherParams& params, const FormationGraph& graph,
                const QuantizerConfig& quant, double c1, double c2,
                MismatchTerm term, Rng rng);

  int id() const { return id_; }

  // Quantized static gains and their scales are public metadata.
  const BigInt& c1_scaled() const { return c1_scaled_; }
  const BigInt& c2_scaled() const { return c2_scaled_; }
  Pow10Scale c1_scale() const { return c1_scale_; }
  Pow10Scale c2_scale() const { return c2_scale_; }

  // Enc2(-c1_scaled) and Enc2(+c2_scaled) under this agent's key, computed
  // once at setup for the edge to keep.
  MultiplierCiphertext make_neg_c1_multiplier();
  MultiplierCiphertext make_pos_c2_multiplier();

  // Registers this agent's owned (tail) edge with the shared bank.
  void register_estimator(EncryptedEstimatorBank& bank, int edge);

  // Measures incident edges from the global state, quantizes and encrypts.
  std::pair<AgentPayload, AgentShadow> sense_and_encrypt(
      const Eigen::VectorXd& z, const DistanceErrors& errors);

  // Decrypts the edge outputs, rescales by the composed public scales and
  // caches mu_hat for the next tick's estimator input.
  DecryptedControl decrypt_and_apply(const AgentOutputs& outputs);

  // Decrypts a ciphertext produced under this agent's own key (the agent may
  // always read its own data; used by round-trip checks).
  BigInt decrypt_own(const Ciphertext& ct) const;

  double mu_hat(int edge) const;

 private:
  int id_;
  CipherParams params_;
  QuantizerConfig quant_;
  MismatchTerm term_;
  Rng rng_;
  SecretKey key_;
  BigInt c1_scaled_, c2_scaled_;
  Pow10Scale c1_scale_, c2_scale_;
  Pow10Scale s1_, meas_scale_;
  std::vector<int> incident_;               // edge ids
  std::vector<double> incidence_sign_;      // +1 tail, -1 head
  std::vector<int> owned_;                  // edges where this agent is tail
  std::vector<std::pair<int, int>> edge_vertices_;
  std::map<int, double> mu_hat_;
};

// Cloud side of the dataflow. Holds only ciphertext material and public
// structure: the static Enc2 gain multipliers per agent, the encrypted
// estimator bank, and the graph incidence needed to route terms. There is
// deliberately no member or method through which a key or plaintext signal
// can enter or leave.
class EdgeEndpoint {
 public:
  struct AgentChannel {
    int agent = -1;
    MultiplierCiphertext neg_c1;
    MultiplierCiphertext pos_c2;
  };

  EdgeEndpoint(const CipherParams& params, std::vector<AgentChannel> channels,
               EncryptedEstimatorBank bank);

  // Evaluates one agent's payload: per-term gain multiplications, signed
  // sums over incident edges and the estimator recursion. No decryption
  // happens here (the type system has nothing to decrypt with).
  AgentOutputs evaluate(const AgentPayload& payload);

  std::vector<AgentOutputs> evaluate_all(
      const std::vector<AgentPayload>& payloads);

  const EncryptedEstimatorBank& bank() const { return bank_; }

 private:
  const AgentChannel& channel(int agent) const;

  CipherParams params_;
  std::vector<AgentChannel> channels_;
  EncryptedEstimatorBank bank_;
};

struct StepRecord {
  std::int64_t t = 0;
  Eigen::VectorXd positions;      // 2n, encrypted pipeline (or plain in
                                  // plaintext mode)
  Eigen::VectorXd dist;           // per edge
  Eigen::VectorXd e_tail, e_head;
  Eigen::VectorXd mu_hat_enc;     // decrypted estimates (encrypted modes)
  Eigen::VectorXd mu_hat_oracle;  // integer-shadow estimates
  Eigen::VectorXd mu_hat_plain;   // unquantized plaintext pipeline
  double enc_time_us = 0;
  double eval_time_us = 0;
};

struct TrajectoryLog {
  std::string scenario_name;
  int n = 0;
  int edge_count = 0;
  RunMode mode = RunMode::kBoth;
  bool timed = false;
  std::vector<StepRecord> steps;
};

struct RunOptions {
  bool measure_timing = false;
  // Cross-check every decrypted integer against the plaintext shadow and
  // fail loudly on mismatch (the exactness claim; cheap, on by default).
  bool check_oracle = true;
};

TrajectoryLog run_closed_loop(const Scenario& scenario,
                              const RunOptions& options = {});

struct TimingQuantiles {
  double p5 = 0, p25 = 0, p50 = 0, p75 = 0, p95 = 0;
};

struct MonteCarloPerN {
  int key_length = 0;
  int control_delay_steps = 0;
  TimingQuantiles enc_us;
  std::vector<double> mean_dist;  // per step, first edge
  std::vector<double> ci_lo, ci_hi;
  std::vector<Eigen::VectorXd> final_dist;  // per run, all edges
};

struct MonteCarloResult {
  int runs = 0;
  std::vector<MonteCarloPerN> per_n;
};

// Seeded replicates per key length: jittered initial positions, fresh keys
// and noise per run, per-step timing distributions, and the per-step mean
// with 95% confidence interval of the first edge's distance. Replicates run
// in parallel up to CIPHERFLEET_THREADS (default: hardware concurrency).
MonteCarloResult run_monte_carlo(const Scenario& scenario, int runs,
                                 const std::vector<int>& key_lengths);

int replicate_thread_cap();

// Wall-clock measurement (monotonic clock) around a thunk; returns the
// thunk's result and the elapsed microseconds.
template <typename F>
auto timing_probe(std::string_view /*label*/, F&& thunk) {
  const auto t0 = std::chrono::steady_clock::now();
  if constexpr (std::is_void_v<decltype(thunk())>) {
    thunk();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::micro>(t1 - t0).count();
  } else {
    auto result = thunk();
    const auto t1 = std::chrono::steady_clock::now();
    const double us =
        std::chrono::duration<double, std::micro>(t1 - t0).count();
    return std::make_pair(std::move(result), us);
  }
}

}  // namespace cipherfleet

#endif  // CIPHERFLEET_SIM_HPP_
