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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cipherfleet/csv.hpp"
#include "cipherfleet/scenario.hpp"
#include "cipherfleet/sim.hpp"

using namespace cipherfleet;

namespace {

Scenario base_triangle() {
  Scenario s;
  s.name = "test_triangle";
  s.n = 3;
  s.edges = {{0, 1}, {1, 2}, {2, 0}};
  s.d_star = Eigen::VectorXd::Constant(3, 0.8);
  s.initial_positions.resize(6);
  s.initial_positions << 0.0, 0.0, 0.9, 0.0, 0.45,
      std::sqrt(0.64 - 0.2025);
  s.mu.resize(3);
  s.mu << 0.1, 0.0, 0.0;
  s.horizon = 50;
  s.L_exp = 14;
  s.seed = 12345;
  s.mode = RunMode::kBoth;
  return s;
}

Scenario at_target() {
  Scenario s = base_triangle();
  const double h = std::sqrt(0.64 - 0.16);
  s.initial_positions << 0.0, 0.0, 0.8, 0.0, 0.4, h;
  s.mu.setZero();
  return s;
}

}  // namespace

TEST_CASE("scenario validation gates") {
  SUBCASE("the bundled-style default passes") {
    CHECK_NOTHROW(base_triangle().validate());
  }
  SUBCASE("tiny plaintext space is rejected naming the bound") {
    Scenario s = base_triangle();
    s.p_exp = 2;
    s.L_exp = 22;
    try {
      s.validate();
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("plaintext-space bound") != std::string::npos);
      CHECK(msg.find("100040000") != std::string::npos);  // 10^8 + 4*10^4
    }
  }
  SUBCASE("exhausted error budget is rejected naming L/2") {
    Scenario s = base_triangle();
    s.L_exp = 6;
    s.horizon = 10000;
    try {
      s.validate();
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("error budget") != std::string::npos);
    }
  }
  SUBCASE("non-integer estimator coefficient is rejected") {
    Scenario s = base_triangle();
    s.quant.s1_exp = -1;  // Ts*kappa/s1 = 0.1
    CHECK_THROWS_AS(s.validate(), NonIntegerCoefficient);
  }
  SUBCASE("structural checks") {
    Scenario s = base_triangle();
    s.mu.resize(2);
    CHECK_THROWS_AS(s.validate(), ValidationError);
  }
}

TEST_CASE("scenario JSON round-trip") {
  const Scenario s = base_triangle();
  const std::string text = scenario_to_json_text(s);
  const Scenario back = scenario_from_json_text(text);
  CHECK(back.n == s.n);
  CHECK(back.edges == s.edges);
  CHECK((back.initial_positions - s.initial_positions).norm() == 0.0);
  CHECK((back.mu - s.mu).norm() == 0.0);
  CHECK(back.horizon == s.horizon);
  CHECK(back.L_exp == s.L_exp);
  CHECK(back.seed == s.seed);
  CHECK(back.quant.sp == s.quant.sp);
  CHECK(scenario_to_json_text(back) == text);
}

TEST_CASE("malformed scenario text raises IoError") {
  CHECK_THROWS_AS(scenario_from_json_text("{not json"), IoError);
  CHECK_THROWS_AS(scenario_from_json_text("{\"name\": \"x\"}"), IoError);
}

TEST_CASE("agent payload round-trips and respects the sp bound") {
  const Scenario sc = base_triangle();
  const FormationGraph graph = sc.graph();
  const CipherParams params = sc.cipher();
  Rng rng(9);
  AgentEndpoint agent(0, params, graph, sc.quant, sc.c1, sc.c2,
                      sc.mismatch_term, rng);

  const Eigen::VectorXd z = relative_positions(sc.initial_positions, graph);
  const DistanceErrors errs = distance_errors(z, graph, sc.mu);
  auto [payload, shadow] = agent.sense_and_encrypt(z, errs);

  REQUIRE(payload.grad_terms.size() == 2);  // agent 0 touches edges 0 and 2
  REQUIRE(payload.comp_terms.size() == 1);  // owns edge 0
  REQUIRE(payload.estimator_inputs.size() == 1);

  const BigInt limit = pow10(sc.quant.sp);
  for (std::size_t i = 0; i < payload.grad_terms.size(); ++i) {
    const auto& [qx, qy] = shadow.grad_ints[i];
    CHECK(agent.decrypt_own(payload.grad_terms[i].x) == qx);
    CHECK(agent.decrypt_own(payload.grad_terms[i].y) == qy);
    CHECK(abs(qx) <= limit);
    CHECK(abs(qy) <= limit);
  }
  CHECK(agent.decrypt_own(payload.estimator_inputs[0].diff) ==
        shadow.diff_ints[0]);
}

TEST_CASE("payload is all zeros at the target shape with converged estimate") {
  const Scenario sc = at_target();
  const FormationGraph graph = sc.graph();
  Rng rng(10);
  AgentEndpoint agent(1, sc.cipher(), graph, sc.quant, sc.c1, sc.c2,
                      sc.mismatch_term, rng);
  const Eigen::VectorXd z = relative_positions(sc.initial_positions, graph);
  const DistanceErrors errs = distance_errors(z, graph, sc.mu);
  auto [payload, shadow] = agent.sense_and_encrypt(z, errs);
  for (const auto& [qx, qy] : shadow.grad_ints) {
    CHECK(qx == 0);
    CHECK(qy == 0);
  }
  for (const BigInt& d : shadow.diff_ints) CHECK(d == 0);
}

TEST_CASE("edge endpoint rejects unknown agents and mixed scales") {
  const Scenario sc = base_triangle();
  const FormationGraph graph = sc.graph();
  const CipherParams params = sc.cipher();
  Rng rng(11);
  AgentEndpoint agent(0, params, graph, sc.quant, sc.c1, sc.c2,
                      sc.mismatch_term, rng);
  EncryptedEstimatorBank bank(params, Pow10Scale{sc.quant.s1_exp},
                              Pow10Scale{sc.quant.estimator_scale_exp},
                              sc.kappa, sc.ts);
  agent.register_estimator(bank, 0);
  std::vector<EdgeEndpoint::AgentChannel> channels(1);
  channels[0].agent = 0;
  channels[0].neg_c1 = agent.make_neg_c1_multiplier();
  channels[0].pos_c2 = agent.make_pos_c2_multiplier();
  EdgeEndpoint edge(params, std::move(channels), std::move(bank));

  const Eigen::VectorXd z = relative_positions(sc.initial_positions, graph);
  const DistanceErrors errs = distance_errors(z, graph, sc.mu);
  auto [payload, shadow] = agent.sense_and_encrypt(z, errs);

  SUBCASE("valid payload evaluates") {
    CHECK_NOTHROW(edge.evaluate(payload));
  }
  SUBCASE("unknown agent") {
    payload.agent = 9;
    CHECK_THROWS_AS(edge.evaluate(payload), UnknownAgent);
  }
  SUBCASE("scale mismatch inside a group") {
    payload.grad_terms[1].scale.exp += 1;
    CHECK_THROWS_AS(edge.evaluate(payload), ScaleMismatch);
  }
  SUBCASE("estimator input scale mismatch") {
    payload.estimator_inputs[0].scale.exp += 1;
    CHECK_THROWS_AS(edge.evaluate(payload), ScaleMismatch);
  }
}

TEST_CASE("single tick matches the plaintext pipeline within quantization") {
  Scenario sc = base_triangle();
  sc.horizon = 1;
  sc.mode = RunMode::kBoth;
  const TrajectoryLog log = run_closed_loop(sc);
  REQUIRE(log.steps.size() == 1);
  // Tick 0: both pipelines saw identical states, so the recorded signals
  // coincide; mu_hat stays 0 on both sides until the first update lands.
  CHECK((log.steps[0].mu_hat_enc - log.steps[0].mu_hat_plain).norm() == 0.0);
}

TEST_CASE("encrypted and plaintext pipelines stay close over a short run") {
  Scenario sc = base_triangle();
  sc.horizon = 400;
  const TrajectoryLog log = run_closed_loop(sc);
  // The closed loops integrate quantization error; at sp = 4 the traces
  // agree to a few parts in 1e-3 over this horizon.
  for (const StepRecord& r : log.steps) {
    CHECK((r.mu_hat_enc - r.mu_hat_plain).lpNorm<Eigen::Infinity>() < 2e-4);
  }
}

TEST_CASE("decrypted signals equal the integer oracle trace") {
  Scenario sc = base_triangle();
  sc.horizon = 120;
  const TrajectoryLog log = run_closed_loop(sc);  // check_oracle throws on
                                                  // any divergence
  for (const StepRecord& r : log.steps) {
    CHECK((r.mu_hat_enc - r.mu_hat_oracle).norm() == 0.0);
  }
}

TEST_CASE("stationary at the target shape") {
  Scenario sc = at_target();
  sc.horizon = 200;
  sc.mode = RunMode::kEncrypted;
  const TrajectoryLog log = run_closed_loop(sc);
  const Eigen::VectorXd& p0 = log.steps.front().positions;
  const Eigen::VectorXd& pT = log.steps.back().positions;
  CHECK((pT - p0).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("determinism: same scenario and seed give identical CSV bytes") {
  Scenario sc = base_triangle();
  sc.horizon = 60;
  std::ostringstream a, b;
  write_trajectory_csv(run_closed_loop(sc), a);
  write_trajectory_csv(run_closed_loop(sc), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("mu_hat_plain_e1") != std::string::npos);

  // Without jitter the seed only drives keys and noise, and the decrypted
  // integers are independent of both -- the trace is seed-invariant.
  Scenario reseeded = sc;
  reseeded.seed = sc.seed + 1;
  std::ostringstream c;
  write_trajectory_csv(run_closed_loop(reseeded), c);
  CHECK(a.str() == c.str());

  // With jittered initial positions the seed does change the trajectory.
  Scenario jittered = sc;
  jittered.jitter.position_radius = 0.1;
  Scenario jittered2 = jittered;
  jittered2.seed = sc.seed + 1;
  std::ostringstream d, e;
  write_trajectory_csv(run_closed_loop(jittered), d);
  write_trajectory_csv(run_closed_loop(jittered2), e);
  CHECK(d.str() != e.str());
}

TEST_CASE("collocated agents abort the run") {
  Scenario sc = base_triangle();
  sc.initial_positions << 0.0, 0.0, 0.0, 0.0, 0.4, 0.6;
  CHECK_THROWS_AS(run_closed_loop(sc), CollocatedAgents);
}

TEST_CASE("plaintext mode runs without encryption columns") {
  Scenario sc = base_triangle();
  sc.mode = RunMode::kPlaintext;
  sc.horizon = 2000;
  const TrajectoryLog log = run_closed_loop(sc);
  std::ostringstream out;
  write_trajectory_csv(log, out);
  CHECK(out.str().find("mu_hat_plain_e1") != std::string::npos);
  CHECK(out.str().find("mu_hat_e1") == std::string::npos);
  CHECK(out.str().find("enc_time_us") == std::string::npos);
  // converging toward the target band already
  CHECK(log.steps.back().dist(1) == doctest::Approx(0.8).epsilon(0.05));
}

TEST_CASE("control delay slows convergence but keeps the loop stable") {
  Scenario fast = base_triangle();
  fast.horizon = 600;
  fast.mode = RunMode::kEncrypted;
  Scenario slow = fast;
  slow.jitter.control_delay_steps = 4;
  const TrajectoryLog lf = run_closed_loop(fast);
  const TrajectoryLog ls = run_closed_loop(slow);
  const double err_fast = std::fabs(lf.steps.back().dist(0) - 0.8);
  const double err_slow = std::fabs(ls.steps.back().dist(0) - 0.8);
  CHECK(err_slow >= err_fast);
}

TEST_CASE("monte carlo: single run has zero CI width") {
  Scenario sc = base_triangle();
  sc.horizon = 40;
  const MonteCarloResult mc = run_monte_carlo(sc, 1, {10});
  REQUIRE(mc.per_n.size() == 1);
  for (std::size_t t = 0; t < mc.per_n[0].mean_dist.size(); ++t) {
    CHECK(mc.per_n[0].ci_hi[t] - mc.per_n[0].ci_lo[t] == 0.0);
  }
  CHECK_THROWS_AS(run_monte_carlo(sc, 0, {10}), ValidationError);
}

TEST_CASE("monte carlo jitters initial positions per replicate") {
  Scenario sc = base_triangle();
  sc.horizon = 10;
  sc.jitter.position_radius = 0.2;
  const MonteCarloResult mc = run_monte_carlo(sc, 3, {10});
  const auto& final_d = mc.per_n[0].final_dist;
  REQUIRE(final_d.size() == 3);
  CHECK((final_d[0] - final_d[1]).norm() > 1e-6);
  CHECK((final_d[1] - final_d[2]).norm() > 1e-6);
}

TEST_CASE("timing probe") {
  SUBCASE("non-negative elapsed time") {
    const double us = timing_probe("noop", [] {});
    CHECK(us >= 0.0);
  }
  SUBCASE("returns the thunk's value") {
    const auto [v, us] = timing_probe("value", [] { return 41 + 1; });
    CHECK(v == 42);
    CHECK(us >= 0.0);
  }
  SUBCASE("nested probes compose additively") {
    double inner_total = 0.0;
    const double outer = timing_probe("outer", [&] {
      for (int i = 0; i < 10; ++i) {
        inner_total += timing_probe("inner", [] {
          volatile double x = 0;
          for (int j = 0; j < 20000; ++j) x += j;
          (void)x;
        });
      }
    });
    CHECK(outer >= inner_total * 0.9);
    CHECK(outer <= inner_total * 3.0 + 500.0);  // generous overhead bound
  }
}

TEST_CASE("CIPHERFLEET_THREADS caps replicate parallelism") {
  setenv("CIPHERFLEET_THREADS", "3", 1);
  CHECK(replicate_thread_cap() == 3);
  setenv("CIPHERFLEET_THREADS", "0", 1);  // invalid -> hardware default
  CHECK(replicate_thread_cap() >= 1);
  unsetenv("CIPHERFLEET_THREADS");
  CHECK(replicate_thread_cap() >= 1);
}

TEST_CASE("single-edge tick matches combined_control on quantized signals") {
  Scenario sc;
  sc.name = "pair";
  sc.n = 2;
  sc.edges = {{0, 1}};
  sc.d_star = Eigen::VectorXd::Constant(1, 0.8);
  sc.initial_positions = Eigen::VectorXd::Zero(4);
  sc.initial_positions << 0.0, 0.0, 1.0, 0.0;
  sc.mu = Eigen::VectorXd::Constant(1, 0.1);
  sc.horizon = 1;
  sc.L_exp = 14;
  sc.seed = 5;
  sc.mode = RunMode::kEncrypted;
  const FormationGraph graph = sc.graph();

  // Recover the tick's applied control from the position delta.
  Scenario sc2 = sc;
  sc2.horizon = 2;
  const TrajectoryLog log2 = run_closed_loop(sc2);
  const Eigen::VectorXd u =
      (log2.steps[1].positions - log2.steps[0].positions) / sc.ts;

  const Eigen::VectorXd z = relative_positions(sc.initial_positions, graph);
  const DistanceErrors errs = distance_errors(z, graph, sc.mu);
  const Eigen::VectorXd u_exact =
      combined_control(z, errs.e_tail, errs.e_head, Eigen::VectorXd::Zero(1),
                       graph, sc.c1, sc.c2, sc.mismatch_term);
  // Quantization at sp = 4 bounds the relative error per term.
  CHECK((u - u_exact).lpNorm<Eigen::Infinity>() <
        0.5e-3 * u_exact.lpNorm<Eigen::Infinity>() + 1e-12);
}

TEST_CASE("edge endpoint holds no key material (grep-level guarantee)") {
  // The cloud-side types must not reference SecretKey at all; everything the
  // edge stores or receives is Z_q ciphertext matrices plus public scales.
  std::ifstream in(CF_SIM_HEADER);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string header = ss.str();
  const auto edge_begin = header.find("class EdgeEndpoint");
  const auto edge_end = header.find("struct StepRecord");
  REQUIRE(edge_begin != std::string::npos);
  REQUIRE(edge_end > edge_begin);
  const std::string edge_section =
      header.substr(edge_begin, edge_end - edge_begin);
  CHECK(edge_section.find("SecretKey") == std::string::npos);
  CHECK(edge_section.find("decrypt(") == std::string::npos);
  CHECK(edge_section.find("decrypt_scalar") == std::string::npos);
  // Payload types that cross the boundary are ciphertext-only too.
  const auto payload_begin = header.find("struct EncryptedTerm");
  const auto payload_end = header.find("struct AgentShadow");
  const std::string payload_section =
      header.substr(payload_begin, payload_end - payload_begin);
  CHECK(payload_section.find("SecretKey") == std::string::npos);
}

TEST_CASE("wrong key cannot read edge outputs") {
  const Scenario sc = base_triangle();
  const FormationGraph graph = sc.graph();
  const CipherParams params = sc.cipher();
  Rng r1(20), r2(21);
  AgentEndpoint owner(0, params, graph, sc.quant, sc.c1, sc.c2,
                      sc.mismatch_term, r1);
  AgentEndpoint snoop(0, params, graph, sc.quant, sc.c1, sc.c2,
                      sc.mismatch_term, r2);
  const Eigen::VectorXd z = relative_positions(sc.initial_positions, graph);
  const DistanceErrors errs = distance_errors(z, graph, sc.mu);
  auto [payload, shadow] = owner.sense_and_encrypt(z, errs);
  // A different key decrypts to something unrelated to the payload value.
  CHECK(snoop.decrypt_own(payload.grad_terms[0].x) != shadow.grad_ints[0].first);
}
