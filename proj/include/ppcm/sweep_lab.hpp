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

// Experiments that regenerate the figure data of the measurement scheme:
// Fisher-information surface, delay scan, precision scaling with n and the
// large-n theoretical breakdown, plus log-log power-law fits.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ppcm/estimators.hpp"
#include "ppcm/phase_model.hpp"
#include "ppcm/shot_simulator.hpp"

namespace ppcm::lab {

/// `count` points from lo to hi, evenly spaced in log10.
std::vector<double> log_grid(double lo, double hi, std::size_t count);
/// `count` points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

struct SurfaceRow {
  double g = 0.0;
  double epsilon = 0.0;
  double f_p = 0.0;
  double log10_f_p = 0.0;
};

/// F_p over the (g, epsilon) grid; base supplies n, kappa and both angles.
/// log10_f_p is taken from the log-space evaluation, so it stays finite
/// after f_p underflows. Rows are ordered g-major.
std::vector<SurfaceRow> fi_surface(const ModelParams& base, std::span<const double> g_grid,
                                   std::span<const double> eps_grid);

struct DelayRow {
  double delay_fs = 0.0;
  double n = 0.0;
  double g_eff = 0.0;
  double p_hat = 0.0;
  double p_exact = 0.0;
};

struct DelayScanConfig {
  std::vector<double> delays;  // fs
  std::vector<double> n_list;
  double g0 = 6.1e-8;
  ModelParams base;
  OverlapParams overlap;
  NoiseParams noise;
  std::uint64_t n_tot = 1000000;
  std::uint64_t master_seed = 0;
};

/// Rows ordered n-major, then by delay.
std::vector<DelayRow> delay_scan(const DelayScanConfig& cfg);

enum class SweepMode { exact, monte_carlo };

struct ScalingConfig {
  std::vector<double> n_list;
  std::vector<double> g_grid;
  ModelParams base;               // g and n are overridden per point
  NoiseParams noise;              // applied only for n > noise_onset_n
  double noise_onset_n = 0.0;
  std::uint64_t nu = 10;
  std::uint64_t n_tot = 1000000;  // events per repetition
  SweepMode mode = SweepMode::monte_carlo;
  std::optional<double> delta_p_g;  // default: centre of g_grid
  SlopeWeighting weighting = SlopeWeighting::unweighted;
  std::uint64_t master_seed = 0;
};

struct ScalingPoint {
  double n = 0.0;
  double delta_g = 0.0;
  double f_extracted = 0.0;          // per detected event
  double f_extracted_per_rep = 0.0;  // per repetition of n_tot events
  double s_slope = 0.0;
  double delta_p = 0.0;
};

double designated_g(const ScalingConfig& cfg);

std::vector<ScalingPoint> scaling_sweep(const ScalingConfig& cfg);

enum class OperatingPoint {
  fixed_epsilon,  // epsilon from base for every n
  tracked,        // epsilon re-chosen per n so the fringe phase equals target_phase
};

struct TheoryConfig {
  double g = 6.1e-8;
  std::vector<double> n_grid;
  ModelParams base;
  OperatingPoint operating_point = OperatingPoint::tracked;
  double target_phase = kPi / 2;
};

struct TheoryRow {
  double n = 0.0;
  double f_p = 0.0;
  double f_p_over_n2 = 0.0;
  double envelope = 0.0;  // exp(-4 n sin^2(kappa g / 2))
};

/// The epsilon used at photon number n under the configured operating point.
double operating_epsilon(const TheoryConfig& cfg, double n);

std::vector<TheoryRow> theory_curve_large_n(const TheoryConfig& cfg);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

enum class PowerLawField { delta_g, f_extracted_per_event, f_extracted_per_rep };

/// Least squares of log(y) on log(x). Needs >= 3 points, all positive.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);
PowerLawFit fit_power_law(std::span<const ScalingPoint> points, PowerLawField field);

}  // namespace ppcm::lab
