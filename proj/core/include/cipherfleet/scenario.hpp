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
#ifndef CIPHERFLEET_SCENARIO_HPP_
#define CIPHERFLEET_SCENARIO_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cipherfleet/formation.hpp"
#include "cipherfleet/lwe.hpp"
#include "cipherfleet/quantizer.hpp"

namespace cipherfleet {

enum class RunMode { kEncrypted, kPlaintext, kBoth };

struct QuantizerConfig {
  int sp = 4;                   // significant figures on the gradient path
  int sp_gain = 1;              // significant figures for the static gains
  int estimator_scale_exp = 6;  // fixed uniform scale for e_tail - mu_hat
  int s1_exp = -2;              // estimator state scale s1 = 10^s1_exp
};

// Sources of run-to-run variability. Positions are jittered uniformly in a
// disc; control_delay_steps holds each control input for D extra ticks,
// emulating encryption latency. delay_scale_us converts a measured per-step
// encryption time into that delay for key-length sweeps (0 disables).
struct JitterModel {
  double position_radius = 0.0;
  int control_delay_steps = 0;
  double delay_scale_us = 0.0;
};

// Homomorphic operation counts and quantizer profile of one simulation step,
// derived from the graph structure and the term split used by the edge.
struct OpProfile {
  std::int64_t mults_per_step = 0;
  std::int64_t adds_per_step = 0;
  std::vector<int> mult_sps;  // quantized variables entering products
  std::vector<int> add_sps;   // quantized variables entering edge-side sums
};

struct Scenario {
  std::string name;

  // formation
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // 0-based
  Eigen::VectorXd d_star;
  Eigen::VectorXd initial_positions;  // stacked 2n
  Eigen::VectorXd mu;                 // true mismatch per edge

  // control
  double c1 = 1.0;
  double c2 = 1.0;
  double kappa = 1.0;
  double ts = 0.01;
  std::int64_t horizon = 0;
  MismatchTerm mismatch_term = MismatchTerm::kAlongEdge;

  // encryption
  int p_exp = 10;
  int L_exp = 14;
  int key_length = 10;
  std::int64_t err_bound = 100;
  bool plain_coefficients = false;

  QuantizerConfig quant;
  RunMode mode = RunMode::kBoth;
  std::uint64_t seed = 0;
  JitterModel jitter;

  FormationGraph graph() const;
  CipherParams cipher() const;
  OpProfile op_profile() const;

  // Enforces the plaintext-space bound (rejecting configurations whose op
  // profile needs more than p) and the worst-case error budget over the
  // horizon, naming the violated bound. Also checks the structural
  // invariants (positions/mismatch sizes, estimator coefficient integer).
  void validate() const;
};

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);
Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& scenario);

}  // namespace cipherfleet

#endif  // CIPHERFLEET_SCENARIO_HPP_
