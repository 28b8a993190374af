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

// Estimates of the coupling g from count records.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppcm/phase_model.hpp"
#include "ppcm/shot_simulator.hpp"

namespace ppcm {

enum class EstimationMethod { inversion, mle, epsilon_sweep };

std::string_view method_name(EstimationMethod m);

struct FitDiagnostics {
  double chi_squared = 0.0;      // weighted residual sum of squares
  double max_abs_residual = 0.0;
  std::size_t points = 0;
  int iterations = 0;
  bool below_zero = false;       // raw estimate was negative
  bool at_lower_bound = false;   // pinned at g = 0
  bool out_of_branch = false;    // data outside 2 g n + eps in [0, pi]
};

struct EstimationResult {
  double g_hat = 0.0;
  double std_err = 0.0;
  EstimationMethod method = EstimationMethod::inversion;
  FitDiagnostics diagnostics;
};

/// Pooled sum(n_d) / sum(n_d + n_r).
double estimate_prob(std::span<const ShotRecord> records);
std::uint64_t total_events(std::span<const ShotRecord> records);

/// Invert P_d = (1 - cos(2 g n + eps)) / 2 on the branch 2 g n + eps in
/// [0, pi]. std_err propagates the binomial error of p_hat over
/// `total_count` events (zero when total_count is 0).
EstimationResult invert_small_g(double p_hat, double n, double epsilon,
                                std::uint64_t total_count = 0);

struct Bracket {
  double low = 0.0;
  double high = 0.0;
};

/// [0, 10 g_inv + pi / (4 n)] with g_inv the clipped inversion estimate.
Bracket default_mle_bracket(double p_hat, double n, double epsilon);

/// Maximum-likelihood g with all other parameters fixed (fixed.g ignored).
/// A maximum pinned at bracket.low == 0 is reported with
/// diagnostics.at_lower_bound; a maximum at any other edge throws BracketError.
EstimationResult mle_g(std::span<const ShotRecord> records, const ModelParams& fixed,
                       Bracket bracket);

struct SweepPoint {
  double epsilon = 0.0;
  double p_hat = 0.0;
  std::uint64_t total = 0;
};

/// Weighted least squares of the small-coupling fringe in g alone.
/// Weights are inverse binomial variances at the fitted model.
EstimationResult fit_epsilon_sweep(std::span<const SweepPoint> points, double n);

/// Returns the fitted residual p_hat - P(g_hat) for each point.
std::vector<double> sweep_residuals(std::span<const SweepPoint> points, double n, double g_hat);

struct SlopePoint {
  double g = 0.0;
  double p_hat = 0.0;
  double weight = 1.0;  // used only by the weighted fit
};

enum class SlopeWeighting { unweighted, weighted };

/// Least-squares slope dP/dg through the points.
double fit_sensitivity(std::span<const SlopePoint> points,
                       SlopeWeighting weighting = SlopeWeighting::unweighted);

/// delta_p / |s|.
double precision(double delta_p, double s);

/// Default projection offsets for the calibration sweep.
std::vector<double> default_sweep_epsilons();

}  // namespace ppcm
