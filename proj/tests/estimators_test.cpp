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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ppcm/errors.hpp"
#include "ppcm/estimators.hpp"
#include "ppcm/parallel.hpp"

namespace {

using namespace ppcm;

double eq9(double g, double n, double eps) { return 0.5 * (1.0 - std::cos(2.0 * g * n + eps)); }

ModelParams operating(double n, double eps = 0.1) {
  ModelParams m;
  m.n = n;
  m.epsilon = eps;
  return m;
}

TEST(EstimateProb, Pooled) {
  const std::vector<ShotRecord> a{{0, 100, 0}};
  EXPECT_EQ(estimate_prob(a), 0.0);
  const std::vector<ShotRecord> b{{3146, 996854, 0}};
  EXPECT_DOUBLE_EQ(estimate_prob(b), 0.003146);
  std::vector<ShotRecord> c{{10, 90, 0}, {30, 70, 0}};
  EXPECT_DOUBLE_EQ(estimate_prob(c), 0.2);
  std::reverse(c.begin(), c.end());
  EXPECT_DOUBLE_EQ(estimate_prob(c), 0.2);
  EXPECT_THROW(estimate_prob(std::vector<ShotRecord>{}), DomainError);
  EXPECT_THROW(estimate_prob(std::vector<ShotRecord>{{0, 0, 0}}), DomainError);
}

TEST(InvertSmallG, Examples) {
  const double eps = 0.3;
  EXPECT_NEAR(invert_small_g(0.5 * (1.0 - std::cos(eps)), 1e5, eps).g_hat, 0.0, 1e-20);
  EXPECT_NEAR(invert_small_g(0.003144, 1e5, 0.1).g_hat, 6.1e-8, 1e-10);
  EXPECT_NEAR(invert_small_g(0.5, 1e4, 0.0).g_hat, ppcm::kPi / 4e4, 1e-18);
}

TEST(InvertSmallG, InvertsForwardMap) {
  for (double n : {1e3, 1e5, 1e7}) {
    for (double eps : {0.05, 0.1, 0.5}) {
      for (double x : {0.01, 0.3, 1.2}) {  // 2 g n
        const double g = x / (2.0 * n);
        const auto r = invert_small_g(eq9(g, n, eps), n, eps);
        EXPECT_NEAR(r.g_hat / g, 1.0, 1e-12) << n << " " << eps << " " << x;
      }
    }
  }
}

TEST(InvertSmallG, StdErrAndFlags) {
  const double n = 1e5, eps = 0.1, p = eq9(6.1e-8, n, eps);
  const auto r = invert_small_g(p, n, eps, 1000000);
  const double slope = n * std::sin(2.0 * 6.1e-8 * n + eps);
  EXPECT_NEAR(r.std_err / (std::sqrt(p * (1 - p) / 1e6) / slope), 1.0, 1e-9);
  EXPECT_TRUE(invert_small_g(0.0001, n, eps).diagnostics.below_zero);
  EXPECT_THROW(invert_small_g(0.0, n, eps), IllConditionedError);
  EXPECT_THROW(invert_small_g(1.2, n, eps), DomainError);
}

TEST(MleBracket, Default) {
  const auto b = default_mle_bracket(0.5, 1e4, 0.0);
  EXPECT_EQ(b.low, 0.0);
  EXPECT_NEAR(b.high, 10.0 * ppcm::kPi / 4e4 + ppcm::kPi / 4e4, 1e-18);
}

std::vector<ShotRecord> exact_records(double p, double total, int nu) {
  std::vector<ShotRecord> out;
  const double nd = std::round(p * total);
  for (int i = 0; i < nu; ++i) {
    out.push_back({static_cast<std::uint64_t>(nd), static_cast<std::uint64_t>(total - nd), 0});
  }
  return out;
}

TEST(Mle, NoiselessRecoversTruth) {
  ModelParams m = operating(1e5);
  m.g = 3e-8;
  const double p = accepted_probability(m).p_d;
  const auto recs = exact_records(p, 1e15, 1);
  const auto r = mle_g(recs, m, default_mle_bracket(p, m.n, m.epsilon));
  EXPECT_NEAR(r.g_hat / 3e-8, 1.0, 1e-6);
  EXPECT_GT(r.std_err, 0.0);
  EXPECT_FALSE(r.diagnostics.at_lower_bound);
}

TEST(Mle, AllRejectedPinsAtZero) {
  const ModelParams m = operating(1e5);
  const std::vector<ShotRecord> recs{{0, 1000000, 0}, {0, 1000000, 0}};
  const auto r = mle_g(recs, m, default_mle_bracket(0.0, m.n, m.epsilon));
  EXPECT_EQ(r.g_hat, 0.0);
  EXPECT_TRUE(r.diagnostics.at_lower_bound);
}

TEST(Mle, MaximumOutsideBracketThrows) {
  ModelParams m = operating(1e5);
  m.g = 3e-8;
  const auto recs = exact_records(accepted_probability(m).p_d, 1e9, 1);
  try {
    mle_g(recs, m, {0.0, 1e-8});
    FAIL() << "expected BracketError";
  } catch (const BracketError& e) {
    EXPECT_LT(e.loglik_low(), e.loglik_high());
  }
  EXPECT_THROW(mle_g(recs, m, {4e-8, 5e-8}), BracketError);
  EXPECT_THROW(mle_g(recs, m, {5e-8, 4e-8}), DomainError);
}

TEST(Mle, EfficiencyMonteCarlo) {
  // kappa = 2, g = 3e-8, n = 1e5, eps = 0.1, nu = 10 records of 1e6.
  ModelParams m = operating(1e5);
  m.g = 3e-8;
  const double p = accepted_probability(m).p_d;
  const int trials = 1000;
  const std::uint64_t nu = 10, n_tot = 1000000;
  const auto estimates = parallel_map<double>(static_cast<std::size_t>(trials), [&](std::size_t t) {
    const auto run = run_repetitions_at(p, nu, n_tot, derive_seed(2718, t));
    return mle_g(run.records, m, default_mle_bracket(estimate_prob(run.records), m.n, m.epsilon))
        .g_hat;
  });
  double mean = 0.0;
  for (double g : estimates) mean += g;
  mean /= trials;
  double var = 0.0;
  for (double g : estimates) var += (g - mean) * (g - mean);
  var /= trials - 1;
  const double crb = 1.0 / (static_cast<double>(nu * n_tot) * fisher_projective(m));
  EXPECT_NEAR(std::sqrt(var / crb), 1.0, 0.2);
  // sampling spread of a variance ratio over T trials is ~ sqrt(2 / (T - 1))
  EXPECT_GE(var / crb, 1.0 - 3.0 * std::sqrt(2.0 / (trials - 1)));
  EXPECT_LE(var / crb, 1.5);
  EXPECT_NEAR(mean, m.g, 4.0 * std::sqrt(crb / trials));
}

std::vector<SweepPoint> sweep_at(double g0, double n, double total, bool noisy, std::uint64_t seed) {
  std::vector<SweepPoint> pts;
  std::uint64_t i = 0;
  for (double eps : default_sweep_epsilons()) {
    const double p = eq9(g0, n, eps);
    double p_hat = p;
    if (noisy) {
      RandomStream s(derive_seed(seed, i++));
      p_hat = static_cast<double>(sample_counts(p, static_cast<std::uint64_t>(total), s).n_d) / total;
    }
    pts.push_back({eps, p_hat, static_cast<std::uint64_t>(total)});
  }
  return pts;
}

TEST(EpsilonSweep, NoiselessIsExact) {
  const auto pts = sweep_at(6.1e-8, 6e5, 5e7, false, 0);
  const auto r = fit_epsilon_sweep(pts, 6e5);
  EXPECT_NEAR(r.g_hat / 6.1e-8, 1.0, 1e-10);
  for (double res : sweep_residuals(pts, 6e5, r.g_hat)) EXPECT_LE(std::abs(res), 1e-12);
  EXPECT_EQ(r.method, EstimationMethod::epsilon_sweep);
  EXPECT_FALSE(r.diagnostics.out_of_branch);
}

TEST(EpsilonSweep, RecoversWithinErrorBars) {
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = fit_epsilon_sweep(sweep_at(6.1e-8, 6e5, 5e7, true, seed), 6e5);
    if (std::abs(r.g_hat - 6.1e-8) <= 3.0 * r.std_err) ++inside;
    EXPECT_GT(r.std_err, 1e-12);
    EXPECT_LT(r.std_err, 1e-9);
  }
  EXPECT_GE(inside, 45);
}

TEST(EpsilonSweep, NullCase) {
  const auto r = fit_epsilon_sweep(sweep_at(0.0, 6e5, 5e7, true, 3), 6e5);
  EXPECT_LE(std::abs(r.g_hat), 3.0 * r.std_err);
}

TEST(EpsilonSweep, DegenerateDesign) {
  std::vector<SweepPoint> pts{{0.1, 0.01, 100}, {0.1, 0.01, 100}, {0.2, 0.02, 100}};
  EXPECT_THROW(fit_epsilon_sweep(pts, 1e5), DegenerateDesignError);
  pts.pop_back();
  EXPECT_THROW(fit_epsilon_sweep(pts, 1e5), DegenerateDesignError);
}

TEST(EpsilonSweep, AgreesWithMle) {
  // Same counts at eps = 0.1 feed both estimators; agreement is a rate.
  const double n = 6e5, g0 = 6.1e-8;
  const int seeds = 200;
  int agree = 0;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto pts = sweep_at(g0, n, 5e7, true, static_cast<std::uint64_t>(seed));
    const auto sweep = fit_epsilon_sweep(pts, n);
    const auto& mid = pts[2];
    ASSERT_EQ(mid.epsilon, 0.1);
    const std::uint64_t nd = static_cast<std::uint64_t>(std::llround(mid.p_hat * mid.total));
    const std::vector<ShotRecord> recs{{nd, mid.total - nd, 0}};
    const auto mle = mle_g(recs, operating(n), default_mle_bracket(mid.p_hat, n, 0.1));
    if (std::abs(sweep.g_hat - mle.g_hat) <= 2.0 * std::hypot(sweep.std_err, mle.std_err)) ++agree;
  }
  EXPECT_GE(agree, 180);
}

TEST(FitSensitivity, Examples) {
  const std::vector<SlopePoint> two{{1e-8, eq9(1e-8, 1e6, 0.1)}, {2e-8, eq9(2e-8, 1e6, 0.1)}};
  EXPECT_NEAR(fit_sensitivity(two),
              (eq9(2e-8, 1e6, 0.1) - eq9(1e-8, 1e6, 0.1)) / 1e-8, 1e-6);
  std::vector<SlopePoint> grid;
  for (int k = 1; k <= 6; ++k) grid.push_back({k * 1e-8, eq9(k * 1e-8, 1e6, 0.1)});
  const double s = fit_sensitivity(grid);
  EXPECT_NEAR(s / (1e6 * std::sin(2.0 * 3.5e-8 * 1e6 + 0.1)), 1.0, 0.02);
  std::vector<SlopePoint> flat{{1e-8, 0.01}, {2e-8, 0.01}, {3e-8, 0.01}};
  EXPECT_EQ(fit_sensitivity(flat), 0.0);
  EXPECT_EQ(fit_sensitivity(flat, SlopeWeighting::weighted), 0.0);
  EXPECT_THROW(fit_sensitivity(std::vector<SlopePoint>{{1e-8, 0.0}, {1e-8, 0.1}}),
               DegenerateDesignError);
}

TEST(Precision, Examples) {
  EXPECT_EQ(precision(0.0, 3.0), 0.0);
  EXPECT_NEAR(precision(1e-5, 1.12e4), 8.928571428571429e-10, 1e-24);
  EXPECT_NEAR(precision(1e-5, 1.12e5), 8.928571428571429e-11, 1e-25);
  EXPECT_THROW(precision(1e-5, 0.0), IllConditionedError);
}

}  // namespace
