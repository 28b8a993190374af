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

// Brute-force reference for the phase model: the joint single-photon and
// probe state in a truncated photon-number basis, with probabilities and
// quantum Fisher information obtained by direct linear algebra.
//
// Intended for n <= 400. Nothing in phase_model depends on this module.
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace ppcm::fock {

using Amplitude = std::complex<double>;
using Amplitudes = std::vector<Amplitude>;

inline constexpr double kMaxOracleN = 400.0;
inline constexpr double kMaxLeakage = 1e-12;

/// ceil(n + 10 sqrt(n) + 25).
std::size_t default_cutoff(double n);

/// Poisson probability mass at or above `cutoff`.
double poisson_tail(double n, std::size_t cutoff);

/// Smallest cutoff whose Poisson tail is <= kMaxLeakage.
std::size_t required_cutoff(double n);

struct FockJointState {
  std::size_t cutoff = 0;
  Amplitudes amp_u;  // photon took the non-interacting arm
  Amplitudes amp_d;  // photon interacted; probe phase kappa * g per photon
  double leakage = 0.0;
};

/// Throws TruncationError when the cutoff leaks more than kMaxLeakage,
/// DomainError when n exceeds kMaxOracleN.
FockJointState build_joint_state(double theta_i, double n, double g, int kappa,
                                 std::optional<std::size_t> cutoff = std::nullopt);

struct Projection {
  double p_d = 0.0;
  double p_r = 0.0;
  Amplitudes accepted_meter;  // unnormalized, squared norm = p_d
  Amplitudes rejected_meter;  // unnormalized, squared norm = p_r
};

Projection project(const FockJointState& state, double theta_f, double epsilon);

using StateFn = std::function<FockJointState(double g)>;

inline constexpr double kDefaultStep = 1e-5;

/// Pure-state QFI 4 (<d psi|d psi> - |<psi|d psi>|^2), derivative by central
/// difference at `step` and `step / 2`. The two must agree to 1e-4 relative
/// or InstabilityError is thrown carrying both.
double qfi_pure(const StateFn& state_fn, double g, double step = kDefaultStep);

struct JointSpec {
  double theta_i = 1.5707963267948966;
  double n = 0.0;
  int kappa = 2;
  std::optional<std::size_t> cutoff;
};

StateFn joint_state_fn(const JointSpec& spec);

struct ConditionalQfi {
  double q_d = 0.0;
  double q_r = 0.0;
  double p_d = 0.0;
};

/// QFI of the normalized accepted and rejected meter states. Both outcome
/// probabilities must be >= 1e-10 (ConditioningError otherwise).
ConditionalQfi conditional_qfi(const JointSpec& spec, double theta_f, double epsilon, double g,
                               double step = kDefaultStep);

}  // namespace ppcm::fock
