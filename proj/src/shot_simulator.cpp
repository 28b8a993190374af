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

#include "ppcm/shot_simulator.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "ppcm/errors.hpp"

namespace ppcm {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void OverlapParams::validate() const {
  if (!(fwhm_pump > 0.0) || !std::isfinite(fwhm_pump)) throw DomainError("fwhm_pump must be > 0");
  if (!(fwhm_single > 0.0) || !std::isfinite(fwhm_single)) {
    throw DomainError("fwhm_single must be > 0");
  }
  if (!(peak_overlap > 0.0 && peak_overlap <= 1.0)) {
    throw DomainError("peak_overlap must be in (0, 1]");
  }
  if (!std::isfinite(delay)) throw DomainError("delay must be finite");
}

void NoiseParams::validate() const {
  if (!(bg_fraction >= 0.0 && bg_fraction < 1.0)) throw DomainError("bg_fraction must be in [0, 1)");
  if (!(bg_prob >= 0.0 && bg_prob <= 1.0)) throw DomainError("bg_prob must be in [0, 1]");
}

double overlap_sigma(const OverlapParams& ov) {
  const double var = (ov.fwhm_pump * ov.fwhm_pump + ov.fwhm_single * ov.fwhm_single) /
                     (8.0 * std::numbers::ln2);
  return std::sqrt(var);
}

double effective_g(double g0, const OverlapParams& ov) {
  const double sigma = overlap_sigma(ov);
  const double z = ov.delay / sigma;
  return g0 * ov.peak_overlap * std::exp(-0.5 * z * z);
}

double effective_prob(double p_d, const NoiseParams& noise) {
  return (1.0 - noise.bg_fraction) * p_d + noise.bg_fraction * noise.bg_prob;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

ShotRecord sample_counts(double p_eff, std::uint64_t n_tot, RandomStream& stream) {
  if (!(p_eff >= 0.0 && p_eff <= 1.0)) throw DomainError("sample_counts: p_eff outside [0, 1]");
  if (n_tot < 1) throw DomainError("sample_counts: n_tot must be >= 1");
  ShotRecord r;
  r.seed_tag = stream.tag();
  if (p_eff == 0.0) {
    r.n_d = 0;
  } else if (p_eff == 1.0) {
    r.n_d = n_tot;
  } else {
    std::binomial_distribution<std::uint64_t> dist(n_tot, p_eff);
    r.n_d = dist(stream.engine());
  }
  r.n_r = n_tot - r.n_d;
  return r;
}

RepetitionSummary summarize(const std::vector<double>& probabilities) {
  const std::size_t nu = probabilities.size();
  if (nu < 2) throw DomainError("summarize: need at least 2 repetitions for a deviation");
  const double mean = std::accumulate(probabilities.begin(), probabilities.end(), 0.0) /
                      static_cast<double>(nu);
  double ss = 0.0;
  for (double p : probabilities) ss += (p - mean) * (p - mean);
  RepetitionSummary s;
  s.nu = nu;
  s.p_mean = mean;
  s.sigma = std::sqrt(ss / static_cast<double>(nu - 1));
  s.delta_p = s.sigma / std::sqrt(static_cast<double>(nu));
  return s;
}

RepetitionRun run_repetitions_at(double p_eff, std::uint64_t nu, std::uint64_t n_tot,
                                 std::uint64_t master_seed) {
  if (nu < 2) throw DomainError("run_repetitions: nu must be >= 2");
  RepetitionRun run;
  run.records.reserve(nu);
  std::vector<double> probs;
  probs.reserve(nu);
  for (std::uint64_t i = 0; i < nu; ++i) {
    RandomStream stream(derive_seed(master_seed, i));
    const ShotRecord rec = sample_counts(p_eff, n_tot, stream);
    probs.push_back(static_cast<double>(rec.n_d) / static_cast<double>(rec.total()));
    run.records.push_back(rec);
  }
  run.summary = summarize(probs);
  return run;
}

RepetitionRun run_repetitions(const ModelParams& params, const NoiseParams& noise,
                              std::uint64_t nu, std::uint64_t n_tot, std::uint64_t master_seed) {
  params.validate();
  noise.validate();
  const double p_eff = effective_prob(accepted_probability(params).p_d, noise);
  return run_repetitions_at(p_eff, nu, n_tot, master_seed);
}

}  // namespace ppcm
