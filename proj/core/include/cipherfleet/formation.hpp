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
// Distance-based formation control on the plane: formation graph,
// distance-error measurements with per-edge mismatches, the gradient control
// law, the mismatch estimator, and single-integrator kinematics. This is the
// plaintext reference the encrypted pipeline is checked against.
#ifndef CIPHERFLEET_FORMATION_HPP_
#define CIPHERFLEET_FORMATION_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "cipherfleet/errors.hpp"

namespace cipherfleet {

// Below this separation the gradient direction is numerically undefined and
// the run is aborted with CollocatedAgents.
inline constexpr double kCollisionEps = 1e-6;

struct FormationGraph {
  int n = 0;                                // agents
  std::vector<std::pair<int, int>> edges;   // (tail, head), 0-based
  Eigen::MatrixXd B;                        // n x |E| incidence
  Eigen::MatrixXd B_est;                    // n x |E|, 1 at each tail
  Eigen::VectorXd d_star;                   // desired distance per edge

  int edge_count() const { return static_cast<int>(edges.size()); }
  int tail(int k) const { return edges[static_cast<std::size_t>(k)].first; }
  int head(int k) const { return edges[static_cast<std::size_t>(k)].second; }
};

struct FormationState {
  Eigen::VectorXd p;   // stacked positions, 2n
  Eigen::VectorXd mu;  // true mismatch per edge
  Eigen::VectorXd xi;  // estimator state per edge
  std::int64_t t = 0;
};

struct EdgeMeasurement {
  Eigen::Vector2d z;  // p_tail - p_head
  double dist = 0;
  double e_tail = 0;
  double e_head = 0;
};

struct DistanceErrors {
  Eigen::VectorXd dist;
  Eigen::VectorXd e_tail;  // e_head + mu
  Eigen::VectorXd e_head;  // ||z_k|| - d*_k
};

// How the estimator correction enters the control law: along the unit edge
// vector (the reading consistent with the gradient term) or isotropically
// with weight mu_hat / ||z||.
enum class MismatchTerm { kAlongEdge, kIsotropic };

FormationGraph build_graph(int n,
                           const std::vector<std::pair<int, int>>& edges,
                           const Eigen::VectorXd& d_star);

// z = B^T (x) I_2 * p, i.e. z_k = p_tail(k) - p_head(k). Stacked 2-vectors.
Eigen::VectorXd relative_positions(const Eigen::VectorXd& p,
                                   const FormationGraph& graph);

DistanceErrors distance_errors(const Eigen::VectorXd& z,
                               const FormationGraph& graph,
                               const Eigen::VectorXd& mu);

EdgeMeasurement edge_measurement(const Eigen::VectorXd& z,
                                 const FormationGraph& graph,
                                 const Eigen::VectorXd& mu, int k);

// u = -c1 * B(x)I_2 * D_z * D_ztilde * e: each edge pulls both endpoints
// along the edge with weight e_k.
Eigen::VectorXd gradient_control(const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& e,
                                 const FormationGraph& graph, double c1);

// Gradient law on per-agent local errors (tails act on e_tail, heads on
// e_head) plus the estimating agents' mismatch correction +c2 * mu_hat along
// the edge. With c2 = c1 the tail's terms combine to -c1 * (e_tail - mu_hat),
// so when mu_hat has converged the shape settles on the head constraints.
Eigen::VectorXd combined_control(const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& e_tail,
                                 const Eigen::VectorXd& e_head,
                                 const Eigen::VectorXd& mu_hat,
                                 const FormationGraph& graph, double c1,
                                 double c2,
                                 MismatchTerm term = MismatchTerm::kAlongEdge);

// xi' = xi + Ts * kappa * (e_tail - xi); mu_hat = xi.
Eigen::VectorXd estimator_step_plain(const Eigen::VectorXd& xi,
                                     const Eigen::VectorXd& e_tail,
                                     double kappa, double ts);

// Forward-Euler single integrator, p' = p + Ts * u.
Eigen::VectorXd step_agents(const Eigen::VectorXd& p, const Eigen::VectorXd& u,
                            double ts);

}  // namespace cipherfleet

#endif  // CIPHERFLEET_FORMATION_HPP_
