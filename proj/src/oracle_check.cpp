// Copyright 2026 The ppcm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppcm/oracle_check.hpp"

#include <cmath>

#include "ppcm/fock_oracle.hpp"
#include "ppcm/parallel.hpp"
#include "ppcm/phase_model.hpp"

namespace ppcm::fock {
namespace {

struct Node {
  double n, g, theta_i, theta_f, epsilon;
  int kappa;
};

std::vector<Node> enumerate(const OracleGrid& grid, double min_g) {
  std::vector<Node> nodes;
  for (double n : grid.n)
    for (double g : grid.g) {
      if (g < min_g) continue;
      for (double ti : grid.theta)
        for (double tf : grid.theta)
          for (double eps : grid.epsilon)
            for (int k : grid.kappa) nodes.push_back({n, g, ti, tf, eps, k});
    }
  return nodes;
}

double oracle_pd(const Node& nd, double g) {
  return project(build_joint_state(nd.theta_i, nd.n, g, nd.kappa), nd.theta_f, nd.epsilon).p_d;
}

ModelParams params_of(const Node& nd) {
  return {nd.theta_i, nd.theta_f, nd.epsilon, nd.g, nd.n, nd.kappa};
}

OracleCheckRow compare(const Node& nd, double tolerance) {
  OracleCheckRow row{nd.n, nd.g, nd.theta_i, nd.theta_f, nd.epsilon, nd.kappa};
  row.p_closed = accepted_probability(params_of(nd)).p_d;
  row.p_oracle = oracle_pd(nd, nd.g);
  row.abs_err = std::abs(row.p_closed - row.p_oracle);
  row.pass = row.abs_err <= tolerance;
  return row;
}

}  // namespace

OracleGrid::OracleGrid() : theta{kPi / 4, kPi / 2, 3 * kPi / 4} {}

std::vector<OracleCheckRow> check_probabilities(const OracleGrid& grid, double tolerance) {
  const auto nodes = enumerate(grid, -1.0);
  return parallel_map<OracleCheckRow>(nodes.size(),
                                      [&](std::size_t i) { return compare(nodes[i], tolerance); });
}

std::vector<FisherChainRow> check_fisher_chain(const OracleGrid& grid, double step) {
  const auto nodes = enumerate(grid, 1e-4);
  return parallel_map<FisherChainRow>(nodes.size(), [&](std::size_t i) {
    const Node& nd = nodes[i];
    FisherChainRow row;
    row.point = compare(nd, 0.0);
    const double h = step;
    const double d = (-oracle_pd(nd, nd.g + 2 * h) + 8 * oracle_pd(nd, nd.g + h) -
                      8 * oracle_pd(nd, nd.g - h) + oracle_pd(nd, nd.g - 2 * h)) /
                     (12 * h);
    const double p = row.point.p_oracle;
    row.f_oracle = d * d / (p * (1.0 - p));
    row.f_closed = fisher_projective(params_of(nd));
    row.rel_err = std::abs(row.f_oracle - row.f_closed) / row.f_closed;
    return row;
  });
}

}  // namespace ppcm::fock
