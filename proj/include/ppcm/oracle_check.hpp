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

// Grid comparison of the closed forms against the Fock-space oracle.
#pragma once

#include <vector>

namespace ppcm::fock {

struct OracleCheckRow {
  double n = 0.0;
  double g = 0.0;
  double theta_i = 0.0;
  double theta_f = 0.0;
  double epsilon = 0.0;
  int kappa = 2;
  double p_closed = 0.0;
  double p_oracle = 0.0;
  double abs_err = 0.0;
  bool pass = false;
};

struct OracleGrid {
  std::vector<double> n{1.0, 4.0, 9.0, 16.0};
  std::vector<double> g{0.0, 0.05, 0.1, 0.2, 0.3};
  std::vector<double> theta;  // used for both theta_i and theta_f; default pi/4, pi/2, 3pi/4
  std::vector<double> epsilon{0.0, 0.1, 1.0};
  std::vector<int> kappa{1, 2};

  OracleGrid();
};

/// Probability comparison at every grid node. Rows ordered n, g, theta_i,
/// theta_f, epsilon, kappa (last fastest).
std::vector<OracleCheckRow> check_probabilities(const OracleGrid& grid, double tolerance);

struct FisherChainRow {
  OracleCheckRow point;   // p fields hold the closed-form and oracle P_d
  double f_closed = 0.0;  // fisher_projective
  double f_oracle = 0.0;  // binomial FI from oracle P_d, derivative by finite difference
  double rel_err = 0.0;
};

/// Oracle dP/dg by a five-point stencil of step h at every grid node with
/// g >= 1e-4.
std::vector<FisherChainRow> check_fisher_chain(const OracleGrid& grid, double step = 1e-4);

}  // namespace ppcm::fock
