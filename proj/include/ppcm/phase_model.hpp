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

// Closed-form physics of projective photon counting on a single-photon
// superposition coupled to a coherent probe by cross-phase modulation.
//
// Conventions used throughout:
//   * the probe branch that meets the interacting photon acquires phase
//     phi = kappa * g, with kappa in {1, 2};
//   * the projection fringe phase is x = n sin(phi) + epsilon, so that in
//     the small-coupling limit P_d = (1 - cos(kappa g n + epsilon)) / 2.
//
// All functions are pure and thread-safe.
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>

namespace ppcm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ModelParams {
  double theta_i = kPi / 2;  // initial superposition angle, [0, pi]
  double theta_f = kPi / 2;  // projection angle, [0, pi]
  double epsilon = 0.1;      // projection phase offset from pi
  double g = 0.0;            // coupling per probe photon (rad)
  double n = 0.0;            // mean probe photon number
  int kappa = 2;             // branch-phase multiplier

  /// Throws DomainError when a field is outside its physical range.
  /// Negative g is accepted here; callers that need g >= 0 check it
  /// themselves (see validate_physical).
  void validate() const;
  /// validate() plus g >= 0.
  void validate_physical() const;

  double branch_phase() const noexcept { return kappa * g; }
};

struct ProbabilityPair {
  double p_d = 0.0;
  double p_r = 1.0;  // always 1 - p_d
};

/// <alpha | alpha e^{i phi}> in polar form.
struct CoherentOverlap {
  double magnitude = 1.0;
  double log_magnitude = 0.0;  // survives underflow of magnitude
  double phase = 0.0;          // in [0, 2 pi)

  std::complex<double> value() const { return std::polar(magnitude, phase); }
};

CoherentOverlap coherent_overlap(double n, double phi);

/// (n * x) mod 2 pi in [0, 2 pi). Accurate to ~1e-15 rad for |n x| <= 1e16.
double reduce_phase(double n, double x);

ProbabilityPair accepted_probability(const ModelParams& p);

/// (1 - cos(2 g n + epsilon)) / 2. Valid while 2 n sin^2 g << 1; the
/// deviation from accepted_probability at kappa = 2 is bounded by 2 n sin^2 g.
double accepted_probability_limit(double g, double n, double epsilon);

/// dP_d / dg.
double sensitivity(const ModelParams& p);
/// d^2 P_d / dg^2.
double sensitivity_curvature(const ModelParams& p);

/// Classical Fisher information of the accepted/rejected outcome.
double fisher_projective(const ModelParams& p);
/// Natural log of fisher_projective, finite even where the value underflows.
/// Returns -inf only when the information is identically zero.
double log_fisher_projective(const ModelParams& p);

/// (dp/dg)^2 / p + (dp/dg)^2 / (1 - p). Throws DomainError for p in {0, 1}.
double fisher_from_prob(double p_d, double dp_dg);

struct JointQfi {
  double as_printed = 0.0;          // n^2 sin^2 th + n sin^2(th/2)
  double generator_variance = 0.0;  // kappa^2 (n^2 sin^2 th + 4 n sin^2(th/2))
};

JointQfi quantum_fisher_joint(double theta_i, double n, int kappa);

enum class Provenance {
  closed_form,        // exact limit of the closed-form expressions
  printed,            // literature value taken as printed
  oracle_calibrated,  // derived from the conditional meter states, checked
                      // against the Fock-space oracle
};

struct BudgetTerm {
  double value = 0.0;
  Provenance source = Provenance::closed_form;
};

/// Small-coupling information budget at theta_i = theta_f = pi/2.
struct FisherBudget {
  BudgetTerm f_p;
  BudgetTerm pd_qd;
  BudgetTerm pr_qr;
  BudgetTerm f_tot;
  BudgetTerm q_j;
};

enum class BudgetSource { printed, oracle_calibrated };

FisherBudget fisher_budget_small_g(double n, double epsilon, int kappa,
                                   BudgetSource source);

/// 1 / sqrt(nu * f_tot).
double cramer_rao(double f_tot, std::uint64_t nu);

}  // namespace ppcm
