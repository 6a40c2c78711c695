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
#include "cipherfleet/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cipherfleet/controller.hpp"

namespace cipherfleet {

using nlohmann::json;

FormationGraph Scenario::graph() const {
  return build_graph(n, edges, d_star);
}

CipherParams Scenario::cipher() const {
  return CipherParams(p_exp, L_exp, key_length, err_bound);
}

OpProfile Scenario::op_profile() const {
  // Term split: the agent quantizes per-edge gradient and compensation
  // 2-vectors; the edge multiplies each by a static Enc2 gain and sums over
  // incident edges, and steps one estimator per edge (two gadget
  // multiplications, or none when coefficients stay plain).
  OpProfile prof;
  const int m = static_cast<int>(edges.size());
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  std::vector<int> owned(static_cast<std::size_t>(n), 0);
  for (const auto& [tail, head] : edges) {
    ++degree[static_cast<std::size_t>(tail)];
    ++degree[static_cast<std::size_t>(head)];
    ++owned[static_cast<std::size_t>(tail)];
  }
  int max_degree = 0;
  for (int i = 0; i < n; ++i) {
    prof.mults_per_step += 2 * degree[static_cast<std::size_t>(i)];  // c1 path
    prof.mults_per_step += 2 * owned[static_cast<std::size_t>(i)];   // c2 path
    prof.adds_per_step += 2 * degree[static_cast<std::size_t>(i)];
    prof.adds_per_step += 2 * owned[static_cast<std::size_t>(i)];
    max_degree = std::max(max_degree, degree[static_cast<std::size_t>(i)]);
  }
  prof.mults_per_step += plain_coefficients ? 0 : 2 * m;  // estimator
  prof.adds_per_step += m;                                // diff encryptions

  // Every homomorphic product touches exactly one quantized variable (the
  // other factor is a static integer gain), and the widest ciphertext sum
  // accumulates one sp-figure term per incident edge.
  prof.mult_sps.push_back(quant.sp);
  for (int i = 0; i < max_degree; ++i) prof.add_sps.push_back(quant.sp);
  return prof;
}

void Scenario::validate() const {
  if (horizon < 1) {
    throw ValidationError("horizon must be at least 1 step");
  }
  if (initial_positions.size() != 2 * n) {
    throw ValidationError("initial_positions must hold 2n values");
  }
  if (mu.size() != static_cast<Eigen::Index>(edges.size())) {
    throw ValidationError("one mismatch value required per edge");
  }
  if (ts <= 0) {
    throw ValidationError("sampling time must be positive");
  }
  if (quant.sp < 1) {
    throw ValidationError("sp must be >= 1");
  }
  graph();  // structural edge checks

  const CipherParams params = cipher();
  const OpProfile prof = op_profile();

  const BigInt bound = min_plaintext_bound(prof.mult_sps, prof.add_sps);
  if (bound >= params.p()) {
    throw ValidationError(
        "plaintext-space bound violated: profile requires p > " +
        bound.str() + " but p = " + params.p().str());
  }
  const BigInt budget =
      error_budget(params, horizon, prof.mults_per_step, prof.adds_per_step);
  const BigInt half_l = params.L() / 2;
  if (budget >= half_l) {
    throw ValidationError("error budget exhausted over horizon: bound " +
                          budget.str() + " >= L/2 = " + half_l.str());
  }
  // The estimator recursion must have an exact integer coefficient.
  estimator_coeff(kappa, ts, Pow10Scale{quant.s1_exp});
}

namespace {

RunMode mode_from_string(const std::string& s) {
  if (s == "encrypted") return RunMode::kEncrypted;
  if (s == "plaintext") return RunMode::kPlaintext;
  if (s == "both") return RunMode::kBoth;
  throw ValidationError("unknown mode '" + s +
                        "' (expected encrypted|plaintext|both)");
}

std::string mode_to_string(RunMode m) {
  switch (m) {
    case RunMode::kEncrypted: return "encrypted";
    case RunMode::kPlaintext: return "plaintext";
    case RunMode::kBoth: return "both";
  }
  return "both";
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    Scenario s;
    s.name = j.value("name", "scenario");
    const auto& graph = j.at("graph");
    s.n = graph.at("n").get<int>();
    for (const auto& e : graph.at("edges")) {
      // 1-based agent ids in the file
      s.edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    }
    const auto& dstar = graph.at("d_star");
    s.d_star.resize(static_cast<Eigen::Index>(dstar.size()));
    for (std::size_t k = 0; k < dstar.size(); ++k) {
      s.d_star(static_cast<Eigen::Index>(k)) = dstar[k].get<double>();
    }
    const auto& pos = j.at("initial_positions");
    s.initial_positions.resize(static_cast<Eigen::Index>(2 * pos.size()));
    for (std::size_t i = 0; i < pos.size(); ++i) {
      s.initial_positions(static_cast<Eigen::Index>(2 * i)) =
          pos[i].at(0).get<double>();
      s.initial_positions(static_cast<Eigen::Index>(2 * i + 1)) =
          pos[i].at(1).get<double>();
    }
    const auto& mus = j.at("mismatches");
    s.mu.resize(static_cast<Eigen::Index>(mus.size()));
    for (std::size_t k = 0; k < mus.size(); ++k) {
      s.mu(static_cast<Eigen::Index>(k)) = mus[k].get<double>();
    }
    const auto& gains = j.at("gains");
    s.c1 = gains.value("c1", 1.0);
    s.c2 = gains.value("c2", 1.0);
    s.kappa = gains.value("kappa", 1.0);
    s.ts = j.at("T_s").get<double>();
    s.horizon = j.at("horizon").get<std::int64_t>();
    const auto& cipher = j.at("cipher");
    s.p_exp = cipher.at("p_exp").get<int>();
    s.L_exp = cipher.at("L_exp").get<int>();
    s.key_length = cipher.at("N").get<int>();
    s.err_bound = cipher.at("err_bound").get<std::int64_t>();
    s.plain_coefficients = cipher.value("plain_coefficients", false);
    const auto& quant = j.at("quantizer");
    s.quant.sp = quant.at("sp").get<int>();
    s.quant.sp_gain = quant.value("sp_gain", 1);
    s.quant.estimator_scale_exp = quant.at("estimator_scale_exp").get<int>();
    s.quant.s1_exp = quant.at("s1_exp").get<int>();
    s.mode = mode_from_string(j.value("mode", "both"));
    s.seed = j.value("seed", std::uint64_t{0});
    const std::string term = j.value("mismatch_term", "along_edge");
    if (term == "along_edge") {
      s.mismatch_term = MismatchTerm::kAlongEdge;
    } else if (term == "isotropic") {
      s.mismatch_term = MismatchTerm::kIsotropic;
    } else {
      throw ValidationError("unknown mismatch_term '" + term + "'");
    }
    if (j.contains("jitter")) {
      const auto& jit = j.at("jitter");
      s.jitter.position_radius = jit.value("position_radius", 0.0);
      s.jitter.control_delay_steps = jit.value("control_delay_steps", 0);
      s.jitter.delay_scale_us = jit.value("delay_scale_us", 0.0);
    }
    return s;
  } catch (const json::exception& e) {
    throw IoError(std::string("scenario field missing or mistyped: ") +
                  e.what());
  }
}

std::string scenario_to_json_text(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["graph"]["n"] = s.n;
  json edges = json::array();
  for (const auto& [tail, head] : s.edges) {
    edges.push_back({tail + 1, head + 1});
  }
  j["graph"]["edges"] = edges;
  json dstar = json::array();
  for (Eigen::Index k = 0; k < s.d_star.size(); ++k) dstar.push_back(s.d_star(k));
  j["graph"]["d_star"] = dstar;
  json pos = json::array();
  for (int i = 0; i < s.n; ++i) {
    pos.push_back({s.initial_positions(2 * i), s.initial_positions(2 * i + 1)});
  }
  j["initial_positions"] = pos;
  json mus = json::array();
  for (Eigen::Index k = 0; k < s.mu.size(); ++k) mus.push_back(s.mu(k));
  j["mismatches"] = mus;
  j["gains"] = {{"c1", s.c1}, {"c2", s.c2}, {"kappa", s.kappa}};
  j["T_s"] = s.ts;
  j["horizon"] = s.horizon;
  j["cipher"] = {{"p_exp", s.p_exp},
                 {"L_exp", s.L_exp},
                 {"N", s.key_length},
                 {"err_bound", s.err_bound},
                 {"plain_coefficients", s.plain_coefficients}};
  j["quantizer"] = {{"sp", s.quant.sp},
                    {"sp_gain", s.quant.sp_gain},
                    {"estimator_scale_exp", s.quant.estimator_scale_exp},
                    {"s1_exp", s.quant.s1_exp}};
  j["mode"] = mode_to_string(s.mode);
  j["seed"] = s.seed;
  j["mismatch_term"] = s.mismatch_term == MismatchTerm::kAlongEdge
                           ? "along_edge"
                           : "isotropic";
  j["jitter"] = {{"position_radius", s.jitter.position_radius},
                 {"control_delay_steps", s.jitter.control_delay_steps},
                 {"delay_scale_us", s.jitter.delay_scale_us}};
  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open scenario file " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json_text(ss.str());
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write scenario file " + path);
  }
  out << scenario_to_json_text(scenario);
}

}  // namespace cipherfleet
