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

#include "ppcm/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ppcm/errors.hpp"
#include "ppcm/phase_model.hpp"

namespace ppcm::fock {
namespace {

constexpr double kMinConditionalProb = 1e-10;
constexpr double kRichardsonTol = 1e-4;
constexpr double kQfiAbsFloor = 1e-9;

double log_poisson(double n, std::size_t m) {
  const double md = static_cast<double>(m);
  return -n + md * std::log(n) - std::lgamma(md + 1.0);
}

double poisson_weight(double n, std::size_t m) {
  if (n == 0.0) return m == 0 ? 1.0 : 0.0;
  return std::exp(log_poisson(n, m));
}

double norm_squared(const Amplitudes& v) {
  double acc = 0.0;
  for (const auto& a : v) acc += std::norm(a);
  return acc;
}

Amplitude inner(const Amplitudes& a, const Amplitudes& b) {
  Amplitude acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

using Curve = std::function<Amplitudes(double)>;

// 4 (<d|d> - |<psi|d>|^2) for a normalized curve psi(g).
double qfi_central(const Curve& psi, double g, double h) {
  const Amplitudes center = psi(g);
  const Amplitudes plus = psi(g + h);
  const Amplitudes minus = psi(g - h);
  Amplitudes deriv(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) deriv[i] = (plus[i] - minus[i]) / (2.0 * h);
  return 4.0 * (norm_squared(deriv) - std::norm(inner(center, deriv)));
}

double qfi_richardson(const Curve& psi, double g, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("qfi: step must be > 0");
  const double coarse = qfi_central(psi, g, step);
  const double fine = qfi_central(psi, g, 0.5 * step);
  const double scale = std::max(std::abs(fine), kQfiAbsFloor);
  if (std::abs(coarse - fine) > kRichardsonTol * scale) {
    std::ostringstream os;
    os.precision(12);
    os << "qfi: central differences disagree (step " << step << ": " << coarse << ", step "
       << 0.5 * step << ": " << fine << ")";
    throw InstabilityError(os.str(), coarse, fine);
  }
  return std::max(0.0, (4.0 * fine - coarse) / 3.0);
}

Amplitudes flatten(const FockJointState& s) {
  Amplitudes v;
  v.reserve(s.amp_u.size() + s.amp_d.size());
  v.insert(v.end(), s.amp_u.begin(), s.amp_u.end());
  v.insert(v.end(), s.amp_d.begin(), s.amp_d.end());
  return v;
}

Amplitudes normalized(Amplitudes v) {
  const double norm = std::sqrt(norm_squared(v));
  for (auto& a : v) a /= norm;
  return v;
}

}  // namespace

std::size_t default_cutoff(double n) {
  return static_cast<std::size_t>(std::ceil(n + 10.0 * std::sqrt(n) + 25.0));
}

double poisson_tail(double n, std::size_t cutoff) {
  if (n == 0.0) return cutoff == 0 ? 1.0 : 0.0;
  double tail = 0.0;
  for (std::size_t m = cutoff;; ++m) {
    const double w = poisson_weight(n, m);
    tail += w;
    if (static_cast<double>(m) > n && w <= 1e-20 * tail) break;
    if (w == 0.0 && static_cast<double>(m) > n) break;
  }
  return tail;
}

std::size_t required_cutoff(double n) {
  std::size_t c = 1;
  // Tail is monotone in the cutoff; step up from the mean.
  if (n > 0.0) c = static_cast<std::size_t>(std::floor(n)) + 1;
  while (poisson_tail(n, c) > kMaxLeakage) ++c;
  return c;
}

FockJointState build_joint_state(double theta_i, double n, double g, int kappa,
                                 std::optional<std::size_t> cutoff) {
  if (!std::isfinite(n) || n < 0.0) throw DomainError("build_joint_state: n must be >= 0");
  if (n > kMaxOracleN) {
    throw DomainError("build_joint_state: n exceeds the oracle scale of 400 photons");
  }
  if (kappa != 1 && kappa != 2) throw DomainError("build_joint_state: kappa must be 1 or 2");
  const std::size_t dim = cutoff.value_or(default_cutoff(n));
  if (dim < 1) throw TruncationError("build_joint_state: cutoff must be >= 1", required_cutoff(n));
  const double leak = poisson_tail(n, dim);
  if (leak > kMaxLeakage) {
    const std::size_t need = required_cutoff(n);
    throw TruncationError("build_joint_state: cutoff " + std::to_string(dim) +
                              " too small for n; need at least " + std::to_string(need),
                          need);
  }

  FockJointState s;
  s.cutoff = dim;
  s.leakage = leak;
  s.amp_u.resize(dim);
  s.amp_d.resize(dim);
  std::vector<double> root(dim);
  double kept = 0.0;
  for (std::size_t m = 0; m < dim; ++m) {
    const double w = poisson_weight(n, m);
    kept += w;
    root[m] = std::sqrt(w);
  }
  const double renorm = 1.0 / std::sqrt(kept);
  const double cu = std::cos(0.5 * theta_i) * renorm;
  const double cd = std::sin(0.5 * theta_i) * renorm;
  const double phi = kappa * g;
  for (std::size_t m = 0; m < dim; ++m) {
    s.amp_u[m] = cu * root[m];
    s.amp_d[m] = std::polar(cd * root[m], phi * static_cast<double>(m));
  }
  return s;
}

Projection project(const FockJointState& state, double theta_f, double epsilon) {
  const double cf = std::cos(0.5 * theta_f);
  const double sf = std::sin(0.5 * theta_f);
  // conj of e^{i (pi - eps)}
  const Amplitude phase = std::polar(1.0, -(kPi - epsilon));
  Projection out;
  out.accepted_meter.resize(state.cutoff);
  out.rejected_meter.resize(state.cutoff);
  for (std::size_t m = 0; m < state.cutoff; ++m) {
    out.accepted_meter[m] = cf * state.amp_u[m] + phase * sf * state.amp_d[m];
    out.rejected_meter[m] = sf * state.amp_u[m] - phase * cf * state.amp_d[m];
  }
  out.p_d = norm_squared(out.accepted_meter);
  out.p_r = norm_squared(out.rejected_meter);
  return out;
}

double qfi_pure(const StateFn& state_fn, double g, double step) {
  return qfi_richardson([&](double x) { return flatten(state_fn(x)); }, g, step);
}

StateFn joint_state_fn(const JointSpec& spec) {
  return [spec](double g) {
    return build_joint_state(spec.theta_i, spec.n, g, spec.kappa, spec.cutoff);
  };
}

ConditionalQfi conditional_qfi(const JointSpec& spec, double theta_f, double epsilon, double g,
                               double step) {
  const StateFn state = joint_state_fn(spec);
  const Projection center = project(state(g), theta_f, epsilon);
  if (center.p_d < kMinConditionalProb || center.p_r < kMinConditionalProb) {
    std::ostringstream os;
    os << "conditional_qfi: outcome probability below " << kMinConditionalProb
       << " (p_d = " << center.p_d << ", p_r = " << center.p_r << ")";
    throw ConditioningError(os.str());
  }
  auto accepted = [&](double x) {
    return normalized(project(state(x), theta_f, epsilon).accepted_meter);
  };
  auto rejected = [&](double x) {
    return normalized(project(state(x), theta_f, epsilon).rejected_meter);
  };
  ConditionalQfi out;
  out.p_d = center.p_d;
  out.q_d = qfi_richardson(accepted, g, step);
  out.q_r = qfi_richardson(rejected, g, step);
  return out;
}

}  // namespace ppcm::fock
