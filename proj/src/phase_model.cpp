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

#include "ppcm/phase_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ppcm/errors.hpp"

namespace ppcm {
namespace {

// 2 pi = kTwoPiHi + kTwoPiMid + kTwoPiLo to about 160 bits.
constexpr double kTwoPiHi = 6.283185307179586;
constexpr double kTwoPiMid = 2.4492935982947064e-16;
constexpr double kTwoPiLo = -5.989539619436679e-33;
constexpr double kInvTwoPi = 0.15915494309189535;

// Round-off window for probabilities.
constexpr double kClampSlack = 4.0 * std::numeric_limits<double>::epsilon();

double clamp_probability(double p) {
  if (p >= 0.0 && p <= 1.0) return p;
  if (p < 0.0 && p >= -kClampSlack) return 0.0;
  if (p > 1.0 && p <= 1.0 + kClampSlack) return 1.0;
  std::ostringstream os;
  os.precision(17);
  os << "probability " << p << " outside [0, 1] beyond round-off";
  throw std::logic_error(os.str());
}

double sq(double v) { return v * v; }

// Every quantity of the fringe, arranged so that P_d and 1 - P_d are sums of
// non-negative terms. upper = 2 P_d, lower = 2 (1 - P_d).
struct Fringe {
  double overlap_weight;  // sin(theta_i) sin(theta_f)
  double log_decay;       // -n (1 - cos phi)
  double decay;
  double phase;           // n sin(phi) + epsilon, reduced
  double phi;
  double upper;
  double lower;
};

Fringe evaluate_fringe(const ModelParams& p) {
  Fringe f{};
  f.phi = p.branch_phase();
  f.overlap_weight = std::sin(p.theta_i) * std::sin(p.theta_f);
  // 1 - cos phi = 2 sin^2(phi / 2) without cancellation.
  f.log_decay = -2.0 * p.n * sq(std::sin(0.5 * f.phi));
  f.decay = std::exp(f.log_decay);
  const double one_minus_decay = -std::expm1(f.log_decay);
  f.phase = reduce_phase(p.n, std::sin(f.phi)) + p.epsilon;
  const double half = 0.5 * f.phase;
  f.upper = 2.0 * sq(std::cos(0.5 * (p.theta_i + p.theta_f))) +
            f.overlap_weight * (one_minus_decay + 2.0 * f.decay * sq(std::sin(half)));
  f.lower = 2.0 * sq(std::sin(0.5 * (p.theta_i - p.theta_f))) +
            f.overlap_weight * (one_minus_decay + 2.0 * f.decay * sq(std::cos(half)));
  return f;
}

// 2 |P''|, the limit of s^2 / (P (1 - P)) at an exact extremum P in {0, 1}.
double fisher_at_extremum(const ModelParams& p) {
  return 2.0 * std::abs(sensitivity_curvature(p));
}

}  // namespace

void ModelParams::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError(msg); };
  if (!std::isfinite(theta_i) || theta_i < 0.0 || theta_i > kPi) fail("theta_i outside [0, pi]");
  if (!std::isfinite(theta_f) || theta_f < 0.0 || theta_f > kPi) fail("theta_f outside [0, pi]");
  if (!std::isfinite(epsilon)) fail("epsilon must be finite");
  if (!std::isfinite(g)) fail("g must be finite");
  if (!std::isfinite(n) || n < 0.0) fail("n must be finite and >= 0");
  if (kappa != 1 && kappa != 2) fail("kappa must be 1 or 2");
}

void ModelParams::validate_physical() const {
  validate();
  if (g < 0.0) throw DomainError("g must be >= 0");
}

double reduce_phase(double n, double x) {
  if (!std::isfinite(n) || !std::isfinite(x)) {
    throw DomainError("reduce_phase: non-finite input");
  }
  const double hi = n * x;
  const double lo = std::fma(n, x, -hi);  // hi + lo == n * x exactly
  const double k = std::nearbyint(hi * kInvTwoPi);
  // hi - k * kTwoPiHi is exact for |k| < 2^53.
  double r = std::fma(-k, kTwoPiHi, hi);
  r = std::fma(-k, kTwoPiMid, r);
  r = std::fma(-k, kTwoPiLo, r);
  r += lo;
  while (r < 0.0) r += kTwoPi;
  while (r >= kTwoPi) r -= kTwoPi;
  return r;
}

CoherentOverlap coherent_overlap(double n, double phi) {
  CoherentOverlap o;
  o.log_magnitude = -2.0 * n * sq(std::sin(0.5 * phi));
  o.magnitude = std::exp(o.log_magnitude);
  o.phase = reduce_phase(n, std::sin(phi));
  return o;
}

ProbabilityPair accepted_probability(const ModelParams& p) {
  const Fringe f = evaluate_fringe(p);
  const double p_d = clamp_probability(0.5 * f.upper);
  return {p_d, 1.0 - p_d};
}

double accepted_probability_limit(double g, double n, double epsilon) {
  // sin^2(x / 2) == (1 - cos x) / 2, evaluated with the product reduced.
  const double half = 0.5 * (reduce_phase(n, 2.0 * g) + epsilon);
  return std::sin(half) * std::sin(half);
}

double sensitivity(const ModelParams& p) {
  const Fringe f = evaluate_fringe(p);
  return 0.5 * p.kappa * p.n * f.overlap_weight * f.decay * std::sin(f.phase + f.phi);
}

double sensitivity_curvature(const ModelParams& p) {
  const Fringe f = evaluate_fringe(p);
  const double y = f.phase + f.phi;
  const double bracket = -p.n * std::sin(f.phi) * std::sin(y) +
                         (p.n * std::cos(f.phi) + 1.0) * std::cos(y);
  return 0.5 * sq(static_cast<double>(p.kappa)) * p.n * f.overlap_weight * f.decay * bracket;
}

double log_fisher_projective(const ModelParams& p) {
  const Fringe f = evaluate_fringe(p);
  if (f.upper <= 0.0 || f.lower <= 0.0) return std::log(fisher_at_extremum(p));
  const double amplitude = p.kappa * p.n * f.overlap_weight * std::abs(std::sin(f.phase + f.phi));
  if (amplitude == 0.0) {
    // Flat slope at a round-off extremum is still the 0 / 0 limit.
    if (std::min(f.upper, f.lower) <= 2.0 * kClampSlack) return std::log(fisher_at_extremum(p));
    return -std::numeric_limits<double>::infinity();
  }
  return 2.0 * std::log(amplitude) + 2.0 * f.log_decay - std::log(f.upper) - std::log(f.lower);
}

double fisher_projective(const ModelParams& p) {
  const Fringe f = evaluate_fringe(p);
  if (f.upper <= 0.0 || f.lower <= 0.0) return fisher_at_extremum(p);
  return std::exp(log_fisher_projective(p));
}

double fisher_from_prob(double p_d, double dp_dg) {
  if (!(p_d > 0.0)) throw DomainError("fisher_from_prob: p_d must be > 0");
  if (!(p_d < 1.0)) throw DomainError("fisher_from_prob: p_d must be < 1");
  const double s2 = dp_dg * dp_dg;
  return s2 / p_d + s2 / (1.0 - p_d);
}

JointQfi quantum_fisher_joint(double theta_i, double n, int kappa) {
  const double s_full = sq(std::sin(theta_i));
  const double s_half = sq(std::sin(0.5 * theta_i));
  JointQfi q;
  q.as_printed = n * n * s_full + n * s_half;
  q.generator_variance = sq(static_cast<double>(kappa)) * (n * n * s_full + 4.0 * n * s_half);
  return q;
}

FisherBudget fisher_budget_small_g(double n, double epsilon, int kappa, BudgetSource source) {
  const double k2 = sq(static_cast<double>(kappa));
  const JointQfi qj = quantum_fisher_joint(kPi / 2, n, kappa);
  FisherBudget b;
  b.f_p = {k2 * n * n, Provenance::closed_form};
  if (source == BudgetSource::printed) {
    const double quarter = 0.25 * epsilon * epsilon;
    b.pd_qd = {(1.0 - quarter) * n, Provenance::printed};
    b.pr_qr = {quarter * n, Provenance::printed};
    b.q_j = {qj.as_printed, Provenance::printed};
  } else {
    // At g -> 0 both conditional meters are |alpha> displaced along
    // i kappa n_hat with weight 1 / (1 -+ e^{i eps}), so P Q = kappa^2 n for
    // either outcome regardless of epsilon.
    b.pd_qd = {k2 * n, Provenance::oracle_calibrated};
    b.pr_qr = {k2 * n, Provenance::oracle_calibrated};
    b.q_j = {qj.generator_variance, Provenance::closed_form};
  }
  b.f_tot = {b.f_p.value + b.pd_qd.value + b.pr_qr.value,
             source == BudgetSource::printed ? Provenance::printed
                                             : Provenance::oracle_calibrated};
  return b;
}

double cramer_rao(double f_tot, std::uint64_t nu) {
  if (!(f_tot > 0.0)) throw DomainError("cramer_rao: f_tot must be > 0");
  if (nu < 1) throw DomainError("cramer_rao: nu must be >= 1");
  return 1.0 / std::sqrt(static_cast<double>(nu) * f_tot);
}

}  // namespace ppcm
