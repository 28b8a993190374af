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

#include <cmath>

#include "ppcm/errors.hpp"
#include "ppcm/fock_oracle.hpp"
#include "ppcm/oracle_check.hpp"
#include "ppcm/phase_model.hpp"

namespace {

using namespace ppcm::fock;
using ppcm::kPi;

TEST(Cutoff, DefaultRule) {
  EXPECT_EQ(default_cutoff(0.0), 25u);
  EXPECT_EQ(default_cutoff(100.0), 225u);
  EXPECT_NEAR(poisson_tail(100.0, 180) / 4.1e-13, 1.0, 0.05);
}

TEST(Cutoff, RequiredCutoffIsMinimal) {
  for (double n : {1.0, 16.0, 100.0, 400.0}) {
    const std::size_t c = required_cutoff(n);
    EXPECT_LE(poisson_tail(n, c), kMaxLeakage);
    EXPECT_GT(poisson_tail(n, c - 1), kMaxLeakage);
  }
}

TEST(BuildJointState, NormalizedAndSplit) {
  const auto s = build_joint_state(kPi / 3, 9.0, 0.2, 2);
  double u = 0.0, d = 0.0;
  for (const auto& a : s.amp_u) u += std::norm(a);
  for (const auto& a : s.amp_d) d += std::norm(a);
  EXPECT_NEAR(u + d, 1.0, 1e-14);
  EXPECT_NEAR(u, std::pow(std::cos(kPi / 6), 2), 1e-14);
  EXPECT_LE(s.leakage, kMaxLeakage);
}

TEST(BuildJointState, ShortCutoffNamesRequirement) {
  try {
    build_joint_state(kPi / 2, 100.0, 0.0, 1, std::size_t{120});
    FAIL() << "expected TruncationError";
  } catch (const ppcm::TruncationError& e) {
    EXPECT_EQ(e.required_cutoff(), required_cutoff(100.0));
    EXPECT_NE(std::string(e.what()).find("need at least"), std::string::npos);
  }
}

TEST(BuildJointState, RejectsOutOfScale) {
  EXPECT_THROW(build_joint_state(kPi / 2, 401.0, 0.0, 1), ppcm::DomainError);
  EXPECT_THROW(build_joint_state(kPi / 2, -1.0, 0.0, 1), ppcm::DomainError);
  EXPECT_THROW(build_joint_state(kPi / 2, 1.0, 0.0, 3), ppcm::DomainError);
}

TEST(Project, ProbabilitiesSumToOne) {
  const auto s = build_joint_state(1.1, 16.0, 0.13, 2);
  const auto p = project(s, 2.0, 0.4);
  EXPECT_NEAR(p.p_d + p.p_r, 1.0, 1e-14);
}

TEST(Project, MatchesClosedFormExamples) {
  struct Case {
    double th_i, th_f, eps, g, n;
    int kappa;
  };
  for (const Case c : {Case{kPi / 2, kPi / 2, 0.1, 0.05, 16.0, 2}, Case{kPi / 4, 3 * kPi / 4, 1.0, 0.3, 9.0, 1},
                       Case{kPi / 2, kPi / 2, 0.0, 0.0, 4.0, 2}}) {
    ppcm::ModelParams m;
    m.theta_i = c.th_i;
    m.theta_f = c.th_f;
    m.epsilon = c.eps;
    m.g = c.g;
    m.n = c.n;
    m.kappa = c.kappa;
    const auto p = project(build_joint_state(c.th_i, c.n, c.g, c.kappa), c.th_f, c.eps);
    EXPECT_NEAR(p.p_d, ppcm::accepted_probability(m).p_d, 1e-12);
  }
}

TEST(Project, CutoffMonotonicity) {
  for (double n : {4.0, 25.0, 100.0}) {
    const std::size_t c = default_cutoff(n);
    const auto a = project(build_joint_state(kPi / 2, n, 0.01, 2, c), kPi / 2, 0.1);
    const auto b = project(build_joint_state(kPi / 2, n, 0.01, 2, 2 * c), kPi / 2, 0.1);
    EXPECT_LE(std::abs(a.p_d - b.p_d), 1e-10);
    const JointSpec sa{kPi / 2, n, 1, c};
    const JointSpec sb{kPi / 2, n, 1, 2 * c};
    const double qa = qfi_pure(joint_state_fn(sa), 0.01);
    const double qb = qfi_pure(joint_state_fn(sb), 0.01);
    EXPECT_LE(std::abs(qa - qb), 1e-10 * qb + 1e-6);
  }
}

TEST(QfiPure, CoherentStateReference) {
  // All weight on the phase-carrying branch: 4 kappa^2 Var(n_hat) = 4 n.
  EXPECT_NEAR(qfi_pure(joint_state_fn({kPi, 25.0, 1, std::nullopt}), 0.0), 100.0, 1e-3);
  EXPECT_NEAR(qfi_pure(joint_state_fn({0.0, 25.0, 1, std::nullopt}), 0.0), 0.0, 1e-6);
}

TEST(QfiPure, JointStateMatchesGeneratorVariance) {
  for (double th : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
    for (double n : {25.0, 100.0}) {
      const double q = qfi_pure(joint_state_fn({th, n, 1, std::nullopt}), 0.0);
      const double ref = ppcm::quantum_fisher_joint(th, n, 1).generator_variance;
      EXPECT_NEAR(q / ref, 1.0, 1e-3) << th << " " << n;
    }
  }
  EXPECT_NEAR(qfi_pure(joint_state_fn({kPi / 2, 100.0, 1, std::size_t{180}}), 0.0) / 10200.0, 1.0,
              1e-3);
}

TEST(QfiPure, RejectsBadStep) {
  EXPECT_THROW(qfi_pure(joint_state_fn({kPi / 2, 4.0, 1, std::nullopt}), 0.0, 0.0), ppcm::DomainError);
}

TEST(ConditionalQfi, BudgetClosesAgainstJointQfi) {
  for (int kappa : {1, 2}) {
    for (double eps : {0.1, 0.5}) {
      const double n = 16.0, g = 1e-4;
      const JointSpec spec{kPi / 2, n, kappa, std::nullopt};
      const auto c = conditional_qfi(spec, kPi / 2, eps, g);
      ppcm::ModelParams m;
      m.g = g;
      m.n = n;
      m.epsilon = eps;
      m.kappa = kappa;
      const double f_tot = ppcm::fisher_projective(m) + c.p_d * c.q_d + (1.0 - c.p_d) * c.q_r;
      const double qj = qfi_pure(joint_state_fn(spec), g);
      EXPECT_NEAR(f_tot / qj, 1.0, 0.05) << kappa << " " << eps;
    }
  }
}

TEST(ConditionalQfi, CalibratedBudgetTermsMatchOracle) {
  for (int kappa : {1, 2}) {
    const double n = 16.0, eps = 0.1, g = 1e-6;
    const auto c = conditional_qfi({kPi / 2, n, kappa, std::nullopt}, kPi / 2, eps, g);
    const auto b = ppcm::fisher_budget_small_g(n, eps, kappa, ppcm::BudgetSource::oracle_calibrated);
    EXPECT_NEAR(c.p_d * c.q_d / b.pd_qd.value, 1.0, 0.02);
    EXPECT_NEAR((1.0 - c.p_d) * c.q_r / b.pr_qr.value, 1.0, 0.02);
  }
}

TEST(ConditionalQfi, UnreachableOutcomeIsConditioningError) {
  EXPECT_THROW(conditional_qfi({kPi / 2, 4.0, 1, std::nullopt}, kPi / 2, 0.0, 0.0),
               ppcm::ConditioningError);
}

TEST(OracleCheck, ProbabilitiesOnDefaultGrid) {
  const auto rows = check_probabilities(OracleGrid{}, 1e-8);
  EXPECT_EQ(rows.size(), 4u * 5u * 9u * 3u * 2u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.pass) << r.n << " " << r.g << " " << r.abs_err;
    ASSERT_LE(r.abs_err, 1e-8);
  }
}

TEST(OracleCheck, FisherChain) {
  const auto rows = check_fisher_chain(OracleGrid{});
  EXPECT_FALSE(rows.empty());
  for (const auto& r : rows) ASSERT_LE(r.rel_err, 1e-4) << r.f_closed << " " << r.f_oracle;
}

}  // namespace
