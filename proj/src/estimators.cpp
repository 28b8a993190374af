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

#include "ppcm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "ppcm/errors.hpp"

namespace ppcm {
namespace {

constexpr double kMinSensitivity = 1e-300;
constexpr int kMleScanPoints = 256;
constexpr int kMaxIterations = 200;

struct Pooled {
  double n_d = 0.0;
  double n_r = 0.0;
};

Pooled pool(std::span<const ShotRecord> records) {
  Pooled p;
  for (const auto& r : records) {
    p.n_d += static_cast<double>(r.n_d);
    p.n_r += static_cast<double>(r.n_r);
  }
  return p;
}

// n_d log P + n_r log(1 - P), with 0 log 0 = 0.
double log_likelihood(const Pooled& c, const ModelParams& params) {
  const ProbabilityPair pp = accepted_probability(params);
  double ll = 0.0;
  if (c.n_d > 0.0) ll += c.n_d * std::log(pp.p_d);
  if (c.n_r > 0.0) ll += c.n_r * std::log(pp.p_r);
  return ll;
}

struct Score {
  double first = 0.0;
  double second = 0.0;
};

Score score(const Pooled& c, const ModelParams& params) {
  const ProbabilityPair pp = accepted_probability(params);
  const double d1 = sensitivity(params);
  const double d2 = sensitivity_curvature(params);
  const double ratio = c.n_d / pp.p_d - c.n_r / pp.p_r;
  const double curv = c.n_d / (pp.p_d * pp.p_d) + c.n_r / (pp.p_r * pp.p_r);
  return {d1 * ratio, d2 * ratio - d1 * d1 * curv};
}

ModelParams with_g(ModelParams p, double g) {
  p.g = g;
  return p;
}

double fringe(double g, double n, double epsilon) {
  return accepted_probability_limit(g, n, epsilon);
}

}  // namespace

std::string_view method_name(EstimationMethod m) {
  switch (m) {
    case EstimationMethod::inversion:
      return "inversion";
    case EstimationMethod::mle:
      return "mle";
    case EstimationMethod::epsilon_sweep:
      return "epsilon_sweep";
  }
  return "unknown";
}

std::uint64_t total_events(std::span<const ShotRecord> records) {
  std::uint64_t total = 0;
  for (const auto& r : records) total += r.total();
  return total;
}

double estimate_prob(std::span<const ShotRecord> records) {
  std::uint64_t accepted = 0;
  for (const auto& r : records) accepted += r.n_d;
  const std::uint64_t total = total_events(records);
  if (total == 0) throw DomainError("estimate_prob: no events in records");
  return static_cast<double>(accepted) / static_cast<double>(total);
}

EstimationResult invert_small_g(double p_hat, double n, double epsilon,
                                std::uint64_t total_count) {
  if (!(p_hat >= 0.0 && p_hat <= 1.0)) throw DomainError("invert_small_g: p_hat outside [0, 1]");
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("invert_small_g: n must be > 0");
  const double branch = std::acos(1.0 - 2.0 * p_hat);  // 2 g n + eps
  const double slope = n * std::sin(branch);
  if (std::abs(slope) < kMinSensitivity) {
    throw IllConditionedError("invert_small_g: fringe slope vanishes at p_hat");
  }
  EstimationResult r;
  r.method = EstimationMethod::inversion;
  r.g_hat = (branch - epsilon) / (2.0 * n);
  if (total_count > 0) {
    r.std_err = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(total_count)) / std::abs(slope);
  }
  r.diagnostics.points = 1;
  r.diagnostics.below_zero = r.g_hat < 0.0;
  return r;
}

Bracket default_mle_bracket(double p_hat, double n, double epsilon) {
  double g_inv = 0.0;
  if (p_hat > 0.0 && p_hat < 1.0) {
    g_inv = std::max(0.0, (std::acos(1.0 - 2.0 * p_hat) - epsilon) / (2.0 * n));
  }
  return {0.0, 10.0 * g_inv + kPi / (4.0 * n)};
}

EstimationResult mle_g(std::span<const ShotRecord> records, const ModelParams& fixed,
                       Bracket bracket) {
  if (records.empty()) throw DomainError("mle_g: no records");
  if (!(bracket.high > bracket.low) || !std::isfinite(bracket.low) ||
      !std::isfinite(bracket.high)) {
    throw DomainError("mle_g: bracket must satisfy low < high");
  }
  fixed.validate();
  const Pooled counts = pool(records);
  if (counts.n_d + counts.n_r <= 0.0) throw DomainError("mle_g: no events in records");

  auto ll = [&](double g) { return log_likelihood(counts, with_g(fixed, g)); };

  // Coarse scan picks the likelihood branch; golden section refines inside it.
  const double width = bracket.high - bracket.low;
  int best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kMleScanPoints; ++i) {
    const double g = bracket.low + width * i / kMleScanPoints;
    const double v = ll(g);
    if (v > best_ll) {
      best_ll = v;
      best = i;
    }
  }
  double a = bracket.low + width * std::max(best - 1, 0) / kMleScanPoints;
  double b = bracket.low + width * std::min(best + 1, kMleScanPoints) / kMleScanPoints;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = ll(c);
  double fd = ll(d);
  int iterations = 0;
  while ((b - a) > 1e-12 * width && iterations < kMaxIterations) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = ll(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = ll(d);
    }
    ++iterations;
  }
  double g_hat = 0.5 * (a + b);

  const double edge_tol = 1e-9 * width;
  const bool near_low = g_hat - bracket.low <= edge_tol;
  const bool near_high = bracket.high - g_hat <= edge_tol;
  EstimationResult r;
  r.method = EstimationMethod::mle;
  if (near_low && score(counts, with_g(fixed, bracket.low)).first <= 0.0) {
    if (bracket.low != 0.0) {
      throw BracketError("mle_g: likelihood maximum at the lower bracket edge", ll(bracket.low),
                         ll(bracket.high));
    }
    g_hat = bracket.low;
    r.diagnostics.at_lower_bound = true;
  } else if (near_high && score(counts, with_g(fixed, bracket.high)).first >= 0.0) {
    throw BracketError("mle_g: likelihood maximum at the upper bracket edge", ll(bracket.low),
                       ll(bracket.high));
  } else {
    // Newton polish on the score; keep the step only if it stays in range and
    // does not lower the likelihood.
    for (int k = 0; k < 20; ++k) {
      const Score s = score(counts, with_g(fixed, g_hat));
      if (!(s.second < 0.0)) break;
      const double next = g_hat - s.first / s.second;
      if (!(next > bracket.low && next < bracket.high)) break;
      if (ll(next) < ll(g_hat)) break;
      const double step = std::abs(next - g_hat);
      g_hat = next;
      ++iterations;
      if (step <= 1e-15 * std::max(std::abs(g_hat), width)) break;
    }
  }

  const ModelParams at_hat = with_g(fixed, g_hat);
  double info = -score(counts, at_hat).second;
  if (!(info > 0.0)) info = (counts.n_d + counts.n_r) * fisher_projective(at_hat);
  if (!(info > 0.0)) throw IllConditionedError("mle_g: zero information at the estimate");
  r.g_hat = g_hat;
  r.std_err = 1.0 / std::sqrt(info);
  r.diagnostics.points = records.size();
  r.diagnostics.iterations = iterations;
  return r;
}

std::vector<double> sweep_residuals(std::span<const SweepPoint> points, double n, double g_hat) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& pt : points) out.push_back(pt.p_hat - fringe(g_hat, n, pt.epsilon));
  return out;
}

EstimationResult fit_epsilon_sweep(std::span<const SweepPoint> points, double n) {
  std::set<double> distinct;
  for (const auto& pt : points) distinct.insert(pt.epsilon);
  if (points.size() < 3 || distinct.size() < 3) {
    throw DegenerateDesignError("fit_epsilon_sweep: need at least 3 distinct epsilon values");
  }
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("fit_epsilon_sweep: n must be > 0");
  for (const auto& pt : points) {
    if (!(pt.p_hat >= 0.0 && pt.p_hat <= 1.0)) {
      throw DomainError("fit_epsilon_sweep: p_hat outside [0, 1]");
    }
    if (pt.total == 0) throw DomainError("fit_epsilon_sweep: point with zero total count");
  }

  // Start from the median of the pointwise inversions.
  std::vector<double> starts;
  for (const auto& pt : points) {
    starts.push_back((std::acos(1.0 - 2.0 * pt.p_hat) - pt.epsilon) / (2.0 * n));
  }
  std::nth_element(starts.begin(), starts.begin() + starts.size() / 2, starts.end());
  double g = starts[starts.size() / 2];

  auto weight = [&](const SweepPoint& pt, double model) {
    const double nt = static_cast<double>(pt.total);
    const double var = std::max(model * (1.0 - model), 0.25 / (nt * nt));
    return nt / var;
  };

  EstimationResult r;
  r.method = EstimationMethod::epsilon_sweep;
  int it = 0;
  double curvature = 0.0;
  for (; it < kMaxIterations; ++it) {
    double num = 0.0;
    curvature = 0.0;
    for (const auto& pt : points) {
      const double model = fringe(g, n, pt.epsilon);
      const double jac = n * std::sin(2.0 * g * n + pt.epsilon);
      const double w = weight(pt, model);
      num += w * jac * (pt.p_hat - model);
      curvature += w * jac * jac;
    }
    if (!(curvature > 0.0)) {
      throw DegenerateDesignError("fit_epsilon_sweep: zero curvature in the normal equation");
    }
    const double step = num / curvature;
    g += step;
    if (std::abs(step) * n <= 1e-15) break;
  }

  double chi2 = 0.0;
  double max_res = 0.0;
  curvature = 0.0;
  bool out_of_branch = false;
  for (const auto& pt : points) {
    const double model = fringe(g, n, pt.epsilon);
    const double jac = n * std::sin(2.0 * g * n + pt.epsilon);
    const double w = weight(pt, model);
    const double res = pt.p_hat - model;
    chi2 += w * res * res;
    max_res = std::max(max_res, std::abs(res));
    curvature += w * jac * jac;
    const double arg = 2.0 * g * n + pt.epsilon;
    if (arg < 0.0 || arg > kPi) out_of_branch = true;
  }
  r.g_hat = g;
  r.std_err = 1.0 / std::sqrt(curvature);
  r.diagnostics.chi_squared = chi2;
  r.diagnostics.max_abs_residual = max_res;
  r.diagnostics.points = points.size();
  r.diagnostics.iterations = it + 1;
  r.diagnostics.below_zero = g < 0.0;
  r.diagnostics.out_of_branch = out_of_branch;
  return r;
}

double fit_sensitivity(std::span<const SlopePoint> points, SlopeWeighting weighting) {
  std::set<double> distinct;
  for (const auto& pt : points) distinct.insert(pt.g);
  if (distinct.size() < 2) throw DegenerateDesignError("fit_sensitivity: need 2 distinct g values");
  double sw = 0.0;
  double sg = 0.0;
  double sp = 0.0;
  for (const auto& pt : points) {
    const double w = weighting == SlopeWeighting::weighted ? pt.weight : 1.0;
    if (!(w > 0.0)) throw DomainError("fit_sensitivity: weights must be > 0");
    sw += w;
    sg += w * pt.g;
    sp += w * pt.p_hat;
  }
  const double g_bar = sg / sw;
  const double p_bar = sp / sw;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& pt : points) {
    const double w = weighting == SlopeWeighting::weighted ? pt.weight : 1.0;
    sxy += w * (pt.g - g_bar) * (pt.p_hat - p_bar);
    sxx += w * (pt.g - g_bar) * (pt.g - g_bar);
  }
  if (!(sxx > 0.0)) throw DegenerateDesignError("fit_sensitivity: zero spread in g");
  return sxy / sxx;
}

double precision(double delta_p, double s) {
  if (s == 0.0 || !std::isfinite(s)) throw IllConditionedError("precision: sensitivity is zero");
  return delta_p / std::abs(s);
}

std::vector<double> default_sweep_epsilons() {
  return {0.05, 0.075, 0.1, 0.125, 0.15, 0.175, 0.2};
}

}  // namespace ppcm
