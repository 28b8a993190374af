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

// Monte Carlo count records for the projective measurement, including the
// temporal-overlap reduction of the coupling and a two-component background
// mixture.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ppcm/phase_model.hpp"

namespace ppcm {

/// Pulse widths in femtoseconds (FWHM of the intensity envelopes).
struct OverlapParams {
  double fwhm_pump = 150.0;
  double fwhm_single = 480.0;
  double peak_overlap = 0.77;
  double delay = 0.0;

  void validate() const;
};

/// Fraction bg_fraction of detected events come from leaked probe light and
/// are accepted with probability bg_prob.
struct NoiseParams {
  double bg_fraction = 0.0;
  double bg_prob = 0.5;

  void validate() const;
};

struct ShotRecord {
  std::uint64_t n_d = 0;
  std::uint64_t n_r = 0;
  std::uint64_t seed_tag = 0;

  std::uint64_t total() const noexcept { return n_d + n_r; }
  friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

struct RepetitionSummary {
  double p_mean = 0.0;
  double sigma = 0.0;    // sample standard deviation, divisor nu - 1
  double delta_p = 0.0;  // sigma / sqrt(nu)
  std::uint64_t nu = 0;
};

struct RepetitionRun {
  RepetitionSummary summary;
  std::vector<ShotRecord> records;
};

/// Std-dev of the Gaussian cross-correlation of the two envelopes (fs).
double overlap_sigma(const OverlapParams& ov);

/// g0 * peak_overlap * exp(-delay^2 / (2 sigma^2)).
double effective_g(double g0, const OverlapParams& ov);

/// (1 - bg_fraction) p_d + bg_fraction bg_prob.
double effective_prob(double p_d, const NoiseParams& noise);

/// Stream seed for item `index` of a run seeded with `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// A seeded random stream. The tag is carried into every record it produces.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed), tag_(seed) {}
  std::mt19937_64& engine() noexcept { return engine_; }
  std::uint64_t tag() const noexcept { return tag_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t tag_;
};

/// Binomial(n_tot, p_eff) accepted count.
ShotRecord sample_counts(double p_eff, std::uint64_t n_tot, RandomStream& stream);

/// Mean, sample deviation and sigma / sqrt(nu) of a set of probabilities.
RepetitionSummary summarize(const std::vector<double>& probabilities);

/// nu independent repetitions of n_tot detected events each. Repetition i
/// draws from derive_seed(master_seed, i). Requires nu >= 2.
RepetitionRun run_repetitions(const ModelParams& params, const NoiseParams& noise,
                              std::uint64_t nu, std::uint64_t n_tot, std::uint64_t master_seed);

/// Same as above for a probability that has already been computed.
RepetitionRun run_repetitions_at(double p_eff, std::uint64_t nu, std::uint64_t n_tot,
                                 std::uint64_t master_seed);

}  // namespace ppcm
