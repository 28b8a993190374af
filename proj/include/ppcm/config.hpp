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

// Run configuration: one flat JSON object, every key optional. Angles are
// radians, delays femtoseconds, photon numbers and counts plain numbers
// (scientific notation accepted).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ppcm/estimators.hpp"
#include "ppcm/phase_model.hpp"
#include "ppcm/shot_simulator.hpp"
#include "ppcm/sweep_lab.hpp"

namespace ppcm {

struct RunConfig {
  // Model point.
  double theta_i = kPi / 2;
  double theta_f = kPi / 2;
  double epsilon = 0.1;
  double g = 6.1e-8;
  double n = 1e5;
  int kappa = 2;

  // Temporal overlap and background.
  double fwhm_pump = 150.0;
  double fwhm_single = 480.0;
  double peak_overlap = 0.77;
  double delay = 0.0;
  double bg_fraction = 0.0;
  double bg_prob = 0.5;
  double noise_onset_n = 0.0;

  // Repetitions.
  std::uint64_t nu = 10;
  std::uint64_t n_tot = 1000000;

  // FI surface.
  double surface_n = 5e4;
  std::vector<double> surface_g_grid;
  std::vector<double> surface_eps_grid;

  // Delay scan.
  double g0 = 6.1e-8;
  std::vector<double> delays;
  std::vector<double> scan_n_list;

  // Scaling sweep.
  std::vector<double> g_grid;
  std::vector<double> n_list;
  lab::SweepMode mode = lab::SweepMode::monte_carlo;
  std::optional<double> delta_p_g;
  SlopeWeighting slope_weighting = SlopeWeighting::unweighted;

  // Large-n theory curve.
  std::vector<double> n_grid;
  lab::OperatingPoint operating_point = lab::OperatingPoint::tracked;
  double target_phase = kPi / 2;

  // Calibration sweep.
  double calib_n = 6e5;
  std::uint64_t calib_total = 50000000;
  std::vector<double> sweep_epsilons;

  // Oracle check.
  double oracle_tolerance = 1e-8;

  ModelParams model() const;
  OverlapParams overlap() const;
  NoiseParams noise() const;
};

/// Documented defaults, grids included.
RunConfig default_config();

/// Parses a JSON object over the defaults. Throws ConfigError naming the key
/// and the violated constraint on malformed input, unknown keys or
/// out-of-range values.
RunConfig parse_config(const std::string& document);
RunConfig parse_config(const nlohmann::json& object);
inline RunConfig parse_config(const char* document) { return parse_config(std::string(document)); }

/// Range checks shared by parse_config and flag overrides.
void validate_config(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace ppcm
