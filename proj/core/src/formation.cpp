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
#include "cipherfleet/formation.hpp"

#include <string>

namespace cipherfleet {

FormationGraph build_graph(int n,
                           const std::vector<std::pair<int, int>>& edges,
                           const Eigen::VectorXd& d_star) {
  if (n < 1) {
    throw InvalidEdge("agent count must be positive");
  }
  if (static_cast<int>(edges.size()) != d_star.size()) {
    throw InvalidEdge("one desired distance required per edge");
  }
  FormationGraph g;
  g.n = n;
  g.edges = edges;
  g.d_star = d_star;
  const int m = g.edge_count();
  g.B = Eigen::MatrixXd::Zero(n, m);
  g.B_est = Eigen::MatrixXd::Zero(n, m);
  for (int k = 0; k < m; ++k) {
    const auto [tail, head] = edges[static_cast<std::size_t>(k)];
    if (tail < 0 || tail >= n || head < 0 || head >= n) {
      throw InvalidEdge("edge " + std::to_string(k) + " references a vertex "
                        "outside 0.." + std::to_string(n - 1));
    }
    if (tail == head) {
      throw InvalidEdge("edge " + std::to_string(k) + " is a self-loop");
    }
    if (d_star(k) <= 0.0) {
      throw InvalidEdge("desired distance for edge " + std::to_string(k) +
                        " must be positive");
    }
    g.B(tail, k) = 1.0;
    g.B(head, k) = -1.0;
    g.B_est(tail, k) = 1.0;
  }
  return g;
}

Eigen::VectorXd relative_positions(const Eigen::VectorXd& p,
                                   const FormationGraph& graph) {
  if (p.size() != 2 * graph.n) {
    throw DimensionMismatch("position vector must have 2n components");
  }
  Eigen::VectorXd z(2 * graph.edge_count());
  for (int k = 0; k < graph.edge_count(); ++k) {
    z.segment<2>(2 * k) =
        p.segment<2>(2 * graph.tail(k)) - p.segment<2>(2 * graph.head(k));
  }
  return z;
}

DistanceErrors distance_errors(const Eigen::VectorXd& z,
                               const FormationGraph& graph,
                               const Eigen::VectorXd& mu) {
  const int m = graph.edge_count();
  DistanceErrors out;
  out.dist.resize(m);
  out.e_tail.resize(m);
  out.e_head.resize(m);
  for (int k = 0; k < m; ++k) {
    const double dist = z.segment<2>(2 * k).norm();
    if (dist < kCollisionEps) {
      throw CollocatedAgents("agents on edge " + std::to_string(k) +
                             " are collocated (distance " +
                             std::to_string(dist) + ")");
    }
    out.dist(k) = dist;
    out.e_head(k) = dist - graph.d_star(k);
    out.e_tail(k) = out.e_head(k) + mu(k);
  }
  return out;
}

EdgeMeasurement edge_measurement(const Eigen::VectorXd& z,
                                 const FormationGraph& graph,
                                 const Eigen::VectorXd& mu, int k) {
  const DistanceErrors e = distance_errors(z, graph, mu);
  EdgeMeasurement m;
  m.z = z.segment<2>(2 * k);
  m.dist = e.dist(k);
  m.e_tail = e.e_tail(k);
  m.e_head = e.e_head(k);
  return m;
}

Eigen::VectorXd gradient_control(const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& e,
                                 const FormationGraph& graph, double c1) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * graph.n);
  for (int k = 0; k < graph.edge_count(); ++k) {
    const Eigen::Vector2d zk = z.segment<2>(2 * k);
    const double dist = zk.norm();
    if (dist < kCollisionEps) {
      throw CollocatedAgents("zero-length edge " + std::to_string(k));
    }
    const Eigen::Vector2d pull = zk * (e(k) / dist);
    u.segment<2>(2 * graph.tail(k)) -= c1 * pull;
    u.segment<2>(2 * graph.head(k)) += c1 * pull;
  }
  return u;
}

Eigen::VectorXd combined_control(const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& e_tail,
                                 const Eigen::VectorXd& e_head,
                                 const Eigen::VectorXd& mu_hat,
                                 const FormationGraph& graph, double c1,
                                 double c2, MismatchTerm term) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * graph.n);
  for (int k = 0; k < graph.edge_count(); ++k) {
    const Eigen::Vector2d zk = z.segment<2>(2 * k);
    const double dist = zk.norm();
    if (dist < kCollisionEps) {
      throw CollocatedAgents("zero-length edge " + std::to_string(k));
    }
    const Eigen::Vector2d zhat = zk / dist;
    u.segment<2>(2 * graph.tail(k)) -= c1 * e_tail(k) * zhat;
    u.segment<2>(2 * graph.head(k)) += c1 * e_head(k) * zhat;
    const Eigen::Vector2d correction =
        term == MismatchTerm::kAlongEdge
            ? Eigen::Vector2d(mu_hat(k) * zhat)
            : Eigen::Vector2d::Constant(mu_hat(k) / dist).eval();
    u.segment<2>(2 * graph.tail(k)) += c2 * correction;
  }
  return u;
}

Eigen::VectorXd estimator_step_plain(const Eigen::VectorXd& xi,
                                     const Eigen::VectorXd& e_tail,
                                     double kappa, double ts) {
  return xi + ts * kappa * (e_tail - xi);
}

Eigen::VectorXd step_agents(const Eigen::VectorXd& p, const Eigen::VectorXd& u,
                            double ts) {
  if (p.size() != u.size()) {
    throw DimensionMismatch("positions and controls differ in size");
  }
  return p + ts * u;
}

}  // namespace cipherfleet
