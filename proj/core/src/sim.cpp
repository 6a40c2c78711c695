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
#include "cipherfleet/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

namespace cipherfleet {

namespace {

// RNG fork labels; one stream per concern keeps replicates independent.
constexpr std::uint64_t kKeyStream = 0x6b65790000000000ULL;
constexpr std::uint64_t kNoiseStream = 0x6e6f697300000000ULL;
constexpr std::uint64_t kJitterStream = 0x6a69747400000000ULL;
constexpr std::uint64_t kReplicaStream = 0x7265706c00000000ULL;

Ciphertext zero_ciphertext(const CipherParams& params) {
  Ciphertext ct;
  ct.rows = 1;
  ct.cols = params.key_length() + 1;
  ct.mat.assign(static_cast<std::size_t>(ct.cols), BigInt(0));
  return ct;
}

double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

AgentEndpoint::AgentEndpoint(int id, const CipherParams& params,
                             const FormationGraph& graph,
                             const QuantizerConfig& quant, double c1,
                             double c2, MismatchTerm term, Rng rng)
    : id_(id),
      params_(params),
      quant_(quant),
      term_(term),
      rng_(rng),
      s1_{quant.s1_exp},
      meas_scale_{quant.estimator_scale_exp} {
  key_ = keygen(params_, rng_);
  const Quantized qc1 = quantize_log(c1, quant.sp_gain);
  const Quantized qc2 = quantize_log(c2, quant.sp_gain);
  c1_scaled_ = qc1.value;
  c1_scale_ = qc1.scale;
  c2_scaled_ = qc2.value;
  c2_scale_ = qc2.scale;
  for (int k = 0; k < graph.edge_count(); ++k) {
    if (graph.tail(k) == id) {
      incident_.push_back(k);
      incidence_sign_.push_back(1.0);
      owned_.push_back(k);
      mu_hat_[k] = 0.0;
    } else if (graph.head(k) == id) {
      incident_.push_back(k);
      incidence_sign_.push_back(-1.0);
    }
    edge_vertices_.emplace_back(graph.tail(k), graph.head(k));
  }
}

MultiplierCiphertext AgentEndpoint::make_neg_c1_multiplier() {
  return encrypt_multiplier(params_, key_, -c1_scaled_, rng_);
}

MultiplierCiphertext AgentEndpoint::make_pos_c2_multiplier() {
  return encrypt_multiplier(params_, key_, c2_scaled_, rng_);
}

void AgentEndpoint::register_estimator(EncryptedEstimatorBank& bank,
                                       int edge) {
  bank.add_edge(edge, key_, rng_);
}

std::pair<AgentPayload, AgentShadow> AgentEndpoint::sense_and_encrypt(
    const Eigen::VectorXd& z, const DistanceErrors& errors) {
  AgentPayload payload;
  AgentShadow shadow;
  payload.agent = id_;

  // Per-edge terms in plaintext first, so one shared scale can be chosen
  // per group (the edge sums ciphertexts, which requires equal scales).
  std::vector<Eigen::Vector2d> grad(incident_.size());
  double grad_max = 0.0;
  for (std::size_t i = 0; i < incident_.size(); ++i) {
    const int k = incident_[i];
    const double sign = incidence_sign_[i];
    const Eigen::Vector2d zk = sign * z.segment<2>(2 * k);
    const double dist = errors.dist(k);
    const double e_local = sign > 0 ? errors.e_tail(k) : errors.e_head(k);
    grad[i] = zk * (e_local / dist);
    grad_max = std::max({grad_max, std::fabs(grad[i].x()),
                         std::fabs(grad[i].y())});
  }
  std::vector<Eigen::Vector2d> comp(owned_.size());
  double comp_max = 0.0;
  for (std::size_t i = 0; i < owned_.size(); ++i) {
    const int k = owned_[i];
    const double dist = errors.dist(k);
    const double mu_hat = mu_hat_.at(k);
    const Eigen::Vector2d zhat = z.segment<2>(2 * k) / dist;
    comp[i] = term_ == MismatchTerm::kAlongEdge
                  ? Eigen::Vector2d(mu_hat * zhat)
                  : Eigen::Vector2d::Constant(mu_hat / dist).eval();
    comp_max = std::max({comp_max, std::fabs(comp[i].x()),
                         std::fabs(comp[i].y())});
  }

  payload.grad_scale = grad_max == 0.0
                           ? Pow10Scale{0}
                           : log_scale_factor(grad_max, quant_.sp);
  payload.comp_scale = comp_max == 0.0
                           ? Pow10Scale{0}
                           : log_scale_factor(comp_max, quant_.sp);

  for (std::size_t i = 0; i < incident_.size(); ++i) {
    const BigInt qx = quantize_at(grad[i].x(), payload.grad_scale);
    const BigInt qy = quantize_at(grad[i].y(), payload.grad_scale);
    EncryptedTerm term;
    term.edge = incident_[i];
    term.scale = payload.grad_scale;
    term.x = encrypt_scalar(params_, key_, qx, rng_);
    term.y = encrypt_scalar(params_, key_, qy, rng_);
    payload.grad_terms.push_back(std::move(term));
    shadow.grad_ints.emplace_back(qx, qy);
  }
  for (std::size_t i = 0; i < owned_.size(); ++i) {
    const BigInt qx = quantize_at(comp[i].x(), payload.comp_scale);
    const BigInt qy = quantize_at(comp[i].y(), payload.comp_scale);
    EncryptedTerm term;
    term.edge = owned_[i];
    term.scale = payload.comp_scale;
    term.x = encrypt_scalar(params_, key_, qx, rng_);
    term.y = encrypt_scalar(params_, key_, qy, rng_);
    payload.comp_terms.push_back(std::move(term));
    shadow.comp_ints.emplace_back(qx, qy);

    const int k = owned_[i];
    const double diff = errors.e_tail(k) - mu_hat_.at(k);
    const BigInt qdiff =
        quantize_uniform(diff, UniformQuantizerSpec{meas_scale_},
                         params_.half_p());
    EstimatorInput input;
    input.edge = k;
    input.scale = meas_scale_;
    input.diff = encrypt_scalar(params_, key_, qdiff, rng_);
    payload.estimator_inputs.push_back(std::move(input));
    shadow.diff_ints.push_back(qdiff);
  }
  return {std::move(payload), std::move(shadow)};
}

DecryptedControl AgentEndpoint::decrypt_and_apply(
    const AgentOutputs& outputs) {
  DecryptedControl out;
  out.u_grad_x_int = decrypt_scalar(params_, key_, outputs.u_grad_x);
  out.u_grad_y_int = decrypt_scalar(params_, key_, outputs.u_grad_y);
  const Pow10Scale grad_total{c1_scale_.exp + outputs.grad_scale.exp};
  out.u = Eigen::Vector2d(dequantize(out.u_grad_x_int, grad_total),
                          dequantize(out.u_grad_y_int, grad_total));
  if (outputs.has_comp) {
    out.u_comp_x_int = decrypt_scalar(params_, key_, outputs.u_comp_x);
    out.u_comp_y_int = decrypt_scalar(params_, key_, outputs.u_comp_y);
    const Pow10Scale comp_total{c2_scale_.exp + outputs.comp_scale.exp};
    out.u += Eigen::Vector2d(dequantize(out.u_comp_x_int, comp_total),
                             dequantize(out.u_comp_y_int, comp_total));
  }
  for (const auto& [edge, xi_ct] : outputs.xi_states) {
    const BigInt xi = decrypt_scalar(params_, key_, xi_ct);
    mu_hat_[edge] = dequantize(xi, Pow10Scale{meas_scale_.exp - s1_.exp});
    out.xi_ints.emplace_back(edge, xi);
  }
  return out;
}

BigInt AgentEndpoint::decrypt_own(const Ciphertext& ct) const {
  return decrypt_scalar(params_, key_, ct);
}

double AgentEndpoint::mu_hat(int edge) const {
  const auto it = mu_hat_.find(edge);
  if (it == mu_hat_.end()) {
    throw UnknownEdge("agent " + std::to_string(id_) +
                      " owns no estimator for edge " + std::to_string(edge));
  }
  return it->second;
}

EdgeEndpoint::EdgeEndpoint(const CipherParams& params,
                           std::vector<AgentChannel> channels,
                           EncryptedEstimatorBank bank)
    : params_(params), channels_(std::move(channels)), bank_(std::move(bank)) {}

const EdgeEndpoint::AgentChannel& EdgeEndpoint::channel(int agent) const {
  for (const auto& ch : channels_) {
    if (ch.agent == agent) return ch;
  }
  throw UnknownAgent("no channel registered for agent " +
                     std::to_string(agent));
}

AgentOutputs EdgeEndpoint::evaluate(const AgentPayload& payload) {
  const AgentChannel& ch = channel(payload.agent);
  AgentOutputs out;
  out.agent = payload.agent;
  out.grad_scale = payload.grad_scale;
  out.comp_scale = payload.comp_scale;

  Ciphertext acc_x = zero_ciphertext(params_);
  Ciphertext acc_y = zero_ciphertext(params_);
  for (const EncryptedTerm& term : payload.grad_terms) {
    if (!(term.scale == payload.grad_scale)) {
      throw ScaleMismatch("gradient term scale differs from group scale");
    }
    acc_x = add_ct(params_, acc_x, mult_ct(params_, ch.neg_c1, term.x));
    acc_y = add_ct(params_, acc_y, mult_ct(params_, ch.neg_c1, term.y));
  }
  out.u_grad_x = std::move(acc_x);
  out.u_grad_y = std::move(acc_y);

  if (!payload.comp_terms.empty()) {
    out.has_comp = true;
    Ciphertext cx = zero_ciphertext(params_);
    Ciphertext cy = zero_ciphertext(params_);
    for (const EncryptedTerm& term : payload.comp_terms) {
      if (!(term.scale == payload.comp_scale)) {
        throw ScaleMismatch("correction term scale differs from group scale");
      }
      cx = add_ct(params_, cx, mult_ct(params_, ch.pos_c2, term.x));
      cy = add_ct(params_, cy, mult_ct(params_, ch.pos_c2, term.y));
    }
    out.u_comp_x = std::move(cx);
    out.u_comp_y = std::move(cy);
  }

  for (const EstimatorInput& input : payload.estimator_inputs) {
    if (!(input.scale == bank_.measurement_scale())) {
      throw ScaleMismatch("estimator input scale differs from bank scale");
    }
    bank_.step(input.edge, input.diff);
    out.xi_states.emplace_back(input.edge, bank_.state(input.edge));
  }
  return out;
}

std::vector<AgentOutputs> EdgeEndpoint::evaluate_all(
    const std::vector<AgentPayload>& payloads) {
  std::vector<AgentOutputs> out;
  out.reserve(payloads.size());
  for (const AgentPayload& p : payloads) {
    out.push_back(evaluate(p));
  }
  return out;
}

namespace {

// Integer shadow of the whole encrypted pipeline for one run.
struct OracleState {
  std::vector<BigInt> xi;  // per edge
};

struct EncryptedPipeline {
  CipherParams params;
  FormationGraph graph;
  std::vector<AgentEndpoint> agents;
  EdgeEndpoint edge;
  BigInt coeff;
  OracleState oracle;
};

EncryptedPipeline build_encrypted_pipeline(const Scenario& sc,
                                           const FormationGraph& graph,
                                           Rng& master) {
  const CipherParams params = sc.cipher();
  std::vector<AgentEndpoint> agents;
  agents.reserve(static_cast<std::size_t>(sc.n));
  for (int i = 0; i < sc.n; ++i) {
    Rng agent_rng = master.fork(kKeyStream | static_cast<std::uint64_t>(i))
                        .fork(kNoiseStream);
    agents.emplace_back(i, params, graph, sc.quant, sc.c1, sc.c2,
                        sc.mismatch_term, agent_rng);
  }
  EncryptedEstimatorBank bank(params, Pow10Scale{sc.quant.s1_exp},
                              Pow10Scale{sc.quant.estimator_scale_exp},
                              sc.kappa, sc.ts, sc.plain_coefficients);
  for (int k = 0; k < graph.edge_count(); ++k) {
    agents[static_cast<std::size_t>(graph.tail(k))].register_estimator(bank,
                                                                       k);
  }
  std::vector<EdgeEndpoint::AgentChannel> channels;
  for (int i = 0; i < sc.n; ++i) {
    EdgeEndpoint::AgentChannel ch;
    ch.agent = i;
    ch.neg_c1 = agents[static_cast<std::size_t>(i)].make_neg_c1_multiplier();
    ch.pos_c2 = agents[static_cast<std::size_t>(i)].make_pos_c2_multiplier();
    channels.push_back(std::move(ch));
  }
  EdgeEndpoint edge(params, std::move(channels), std::move(bank));
  OracleState oracle;
  oracle.xi.assign(static_cast<std::size_t>(graph.edge_count()), BigInt(0));
  return {params, graph, std::move(agents), std::move(edge),
          estimator_coeff(sc.kappa, sc.ts, Pow10Scale{sc.quant.s1_exp}),
          std::move(oracle)};
}

}  // namespace

TrajectoryLog run_closed_loop(const Scenario& sc, const RunOptions& options) {
  sc.validate();
  const FormationGraph graph = sc.graph();
  const int m = graph.edge_count();
  Rng master(sc.seed);

  Eigen::VectorXd p0 = sc.initial_positions;
  if (sc.jitter.position_radius > 0.0) {
    Rng jitter_rng = master.fork(kJitterStream);
    for (int i = 0; i < sc.n; ++i) {
      const double r =
          sc.jitter.position_radius * std::sqrt(jitter_rng.uniform_unit());
      const double theta = 2.0 * M_PI * jitter_rng.uniform_unit();
      p0(2 * i) += r * std::cos(theta);
      p0(2 * i + 1) += r * std::sin(theta);
    }
  }

  const bool run_enc = sc.mode != RunMode::kPlaintext;
  const bool run_plain = sc.mode != RunMode::kEncrypted;

  TrajectoryLog log;
  log.scenario_name = sc.name;
  log.n = sc.n;
  log.edge_count = m;
  log.mode = sc.mode;
  log.timed = options.measure_timing;
  log.steps.reserve(static_cast<std::size_t>(sc.horizon));

  // Unquantized plaintext pipeline state.
  Eigen::VectorXd p_plain = p0;
  Eigen::VectorXd xi_plain = Eigen::VectorXd::Zero(m);

  // Encrypted pipeline state.
  std::optional<EncryptedPipeline> enc;
  Eigen::VectorXd p_enc = p0;
  if (run_enc) {
    enc.emplace(build_encrypted_pipeline(sc, graph, master));
  }
  Eigen::VectorXd held_u = Eigen::VectorXd::Zero(2 * sc.n);
  const int delay = std::max(0, sc.jitter.control_delay_steps);

  const Pow10Scale mu_scale{sc.quant.estimator_scale_exp - sc.quant.s1_exp};

  for (std::int64_t t = 0; t < sc.horizon; ++t) {
    StepRecord rec;
    rec.t = t;

    // Plaintext reference pipeline (no artificial delay; it models the
    // unencrypted baseline).
    Eigen::VectorXd z_plain, u_plain;
    DistanceErrors err_plain;
    if (run_plain) {
      z_plain = relative_positions(p_plain, graph);
      err_plain = distance_errors(z_plain, graph, sc.mu);
      u_plain = combined_control(z_plain, err_plain.e_tail, err_plain.e_head,
                                 xi_plain, graph, sc.c1, sc.c2,
                                 sc.mismatch_term);
      rec.mu_hat_plain = xi_plain;
    }

    if (run_enc) {
      const Eigen::VectorXd z = relative_positions(p_enc, graph);
      const DistanceErrors errs = distance_errors(z, graph, sc.mu);
      rec.positions = p_enc;
      rec.dist = errs.dist;
      rec.e_tail = errs.e_tail;
      rec.e_head = errs.e_head;
      rec.mu_hat_enc.resize(m);
      rec.mu_hat_oracle.resize(m);
      for (int k = 0; k < m; ++k) {
        rec.mu_hat_enc(k) =
            enc->agents[static_cast<std::size_t>(graph.tail(k))].mu_hat(k);
        rec.mu_hat_oracle(k) =
            dequantize(enc->oracle.xi[static_cast<std::size_t>(k)], mu_scale);
      }

      if (t % (delay + 1) == 0) {
        // Agent side: sense, quantize, encrypt.
        std::vector<AgentPayload> payloads;
        std::vector<AgentShadow> shadows;
        payloads.reserve(static_cast<std::size_t>(sc.n));
        shadows.reserve(static_cast<std::size_t>(sc.n));
        double enc_us = 0;
        for (int i = 0; i < sc.n; ++i) {
          auto [pair, us] = timing_probe("agent_encrypt", [&] {
            return enc->agents[static_cast<std::size_t>(i)].sense_and_encrypt(
                z, errs);
          });
          enc_us += us;
          payloads.push_back(std::move(pair.first));
          shadows.push_back(std::move(pair.second));
        }

        // Edge side: homomorphic evaluation only.
        auto [outputs, eval_us] = timing_probe("edge_evaluate", [&] {
          return enc->edge.evaluate_all(payloads);
        });
        if (options.measure_timing) {
          rec.enc_time_us = enc_us;
          rec.eval_time_us = eval_us;
        }

        // Integer shadow of the same tick.
        std::vector<std::vector<BigInt>> oracle_u(
            static_cast<std::size_t>(sc.n));
        for (int i = 0; i < sc.n; ++i) {
          const AgentShadow& sh = shadows[static_cast<std::size_t>(i)];
          const AgentEndpoint& agent = enc->agents[static_cast<std::size_t>(i)];
          BigInt gx = 0, gy = 0;
          for (const auto& [qx, qy] : sh.grad_ints) {
            gx += qx;
            gy += qy;
          }
          BigInt cx = 0, cy = 0;
          for (const auto& [qx, qy] : sh.comp_ints) {
            cx += qx;
            cy += qy;
          }
          oracle_u[static_cast<std::size_t>(i)] = {
              -agent.c1_scaled() * gx, -agent.c1_scaled() * gy,
              agent.c2_scaled() * cx, agent.c2_scaled() * cy};
          std::size_t d = 0;
          for (const AgentPayload& p : payloads) {
            if (p.agent != i) continue;
            for (const EstimatorInput& input : p.estimator_inputs) {
              enc->oracle.xi[static_cast<std::size_t>(input.edge)] +=
                  enc->coeff * sh.diff_ints[d++];
            }
          }
        }

        // Agent side: decrypt, rescale, cache mu_hat.
        Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * sc.n);
        for (int i = 0; i < sc.n; ++i) {
          const DecryptedControl dec =
              enc->agents[static_cast<std::size_t>(i)].decrypt_and_apply(
                  outputs[static_cast<std::size_t>(i)]);
          u.segment<2>(2 * i) = dec.u;
          if (options.check_oracle) {
            const auto& oru = oracle_u[static_cast<std::size_t>(i)];
            const bool grad_ok = dec.u_grad_x_int == oru[0] &&
                                 dec.u_grad_y_int == oru[1];
            bool comp_ok = true;
            if (outputs[static_cast<std::size_t>(i)].has_comp) {
              comp_ok = dec.u_comp_x_int == oru[2] &&
                        dec.u_comp_y_int == oru[3];
            }
            bool xi_ok = true;
            for (const auto& [edge, xi] : dec.xi_ints) {
              xi_ok = xi_ok &&
                      xi == enc->oracle.xi[static_cast<std::size_t>(edge)];
            }
            if (!grad_ok || !comp_ok || !xi_ok) {
              throw std::runtime_error(
                  "decrypted value diverged from the integer oracle at step " +
                  std::to_string(t) +
                  " (error budget or plaintext range violated)");
            }
          }
        }
        held_u = u;
      }
      p_enc = step_agents(p_enc, held_u, sc.ts);
    } else {
      rec.positions = p_plain;
      rec.dist = err_plain.dist;
      rec.e_tail = err_plain.e_tail;
      rec.e_head = err_plain.e_head;
    }

    if (run_plain) {
      xi_plain = estimator_step_plain(xi_plain, err_plain.e_tail, sc.kappa,
                                      sc.ts);
      p_plain = step_agents(p_plain, u_plain, sc.ts);
    }

    log.steps.push_back(std::move(rec));
  }
  return log;
}

int replicate_thread_cap() {
  if (const char* env = std::getenv("CIPHERFLEET_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

MonteCarloResult run_monte_carlo(const Scenario& base, int runs,
                                 const std::vector<int>& key_lengths) {
  if (runs < 1) {
    throw ValidationError("Monte Carlo requires at least one run");
  }
  MonteCarloResult result;
  result.runs = runs;
  Rng master(base.seed);

  for (std::size_t ni = 0; ni < key_lengths.size(); ++ni) {
    const int N = key_lengths[ni];
    Scenario variant = base;
    variant.key_length = N;
    variant.mode = RunMode::kEncrypted;

    // Delay knob: emulate slower control updates for longer keys, scaled by
    // a short calibration measurement of the per-step encryption cost.
    int delay = base.jitter.control_delay_steps;
    if (base.jitter.delay_scale_us > 0.0) {
      Scenario calib = variant;
      calib.horizon = std::min<std::int64_t>(50, base.horizon);
      calib.jitter.position_radius = 0.0;
      calib.jitter.control_delay_steps = 0;
      calib.seed = master.fork(kReplicaStream | (ni << 20)).seed();
      RunOptions copt;
      copt.measure_timing = true;
      const TrajectoryLog tl = run_closed_loop(calib, copt);
      std::vector<double> samples;
      for (const StepRecord& r : tl.steps) {
        if (r.enc_time_us > 0) samples.push_back(r.enc_time_us);
      }
      std::sort(samples.begin(), samples.end());
      delay += static_cast<int>(
          std::lround(base.jitter.delay_scale_us * quantile(samples, 0.5)));
    }
    variant.jitter.control_delay_steps = delay;

    std::vector<TrajectoryLog> logs(static_cast<std::size_t>(runs));
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(runs));
    for (int r = 0; r < runs; ++r) {
      seeds[static_cast<std::size_t>(r)] =
          master.fork(kReplicaStream | (ni << 20) | static_cast<unsigned>(r))
              .seed();
    }

    std::atomic<int> next{0};
    auto worker = [&] {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= runs) return;
        Scenario rep = variant;
        rep.seed = seeds[static_cast<std::size_t>(r)];
        RunOptions opt;
        opt.measure_timing = true;
        logs[static_cast<std::size_t>(r)] = run_closed_loop(rep, opt);
      }
    };
    const int threads = std::min(replicate_thread_cap(), runs);
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(threads));
      for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (std::thread& th : pool) th.join();
    }

    MonteCarloPerN per;
    per.key_length = N;
    per.control_delay_steps = delay;

    const std::size_t steps = logs[0].steps.size();
    per.mean_dist.resize(steps);
    per.ci_lo.resize(steps);
    per.ci_hi.resize(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      double sum = 0, sum2 = 0;
      for (const TrajectoryLog& tl : logs) {
        const double d = tl.steps[t].dist(0);
        sum += d;
        sum2 += d * d;
      }
      const double mean = sum / runs;
      double half = 0.0;
      if (runs > 1) {
        const double var =
            std::max(0.0, (sum2 - runs * mean * mean) / (runs - 1));
        half = 1.96 * std::sqrt(var / runs);
      }
      per.mean_dist[t] = mean;
      per.ci_lo[t] = mean - half;
      per.ci_hi[t] = mean + half;
    }

    std::vector<double> samples;
    for (const TrajectoryLog& tl : logs) {
      for (const StepRecord& r : tl.steps) {
        if (r.enc_time_us > 0) samples.push_back(r.enc_time_us);
      }
      per.final_dist.push_back(tl.steps.back().dist);
    }
    std::sort(samples.begin(), samples.end());
    per.enc_us = {quantile(samples, 0.05), quantile(samples, 0.25),
                  quantile(samples, 0.50), quantile(samples, 0.75),
                  quantile(samples, 0.95)};
    result.per_n.push_back(std::move(per));
  }
  return result;
}

}  // namespace cipherfleet
