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

#include "ppcm/sweep_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ppcm/errors.hpp"
#include "ppcm/parallel.hpp"

namespace ppcm::lab {
namespace {

// log10 of the smallest subnormal; stands in for log10(0).
const double kLog10Floor = std::log10(std::numeric_limits<double>::denorm_min());

ModelParams at(ModelParams p, double g, double n) {
  p.g = g;
  p.n = n;
  return p;
}

struct GridSample {
  double p = 0.0;
  double delta_p = 0.0;
};

}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > 0.0)) throw DomainError("log_grid: bounds must be > 0");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

std::vector<SurfaceRow> fi_surface(const ModelParams& base, std::span<const double> g_grid,
                                   std::span<const double> eps_grid) {
  if (g_grid.empty() || eps_grid.empty()) throw DomainError("fi_surface: empty grid");
  base.validate();
  const std::size_t cols = eps_grid.size();
  return parallel_map<SurfaceRow>(g_grid.size() * cols, [&](std::size_t idx) {
    ModelParams p = base;
    p.g = g_grid[idx / cols];
    p.epsilon = eps_grid[idx % cols];
    SurfaceRow row{p.g, p.epsilon, fisher_projective(p), 0.0};
    const double log_f = log_fisher_projective(p);
    row.log10_f_p = std::isfinite(log_f) ? log_f / std::numbers::ln10 : kLog10Floor;
    return row;
  });
}

std::vector<DelayRow> delay_scan(const DelayScanConfig& cfg) {
  cfg.base.validate();
  cfg.overlap.validate();
  cfg.noise.validate();
  if (cfg.n_tot < 1) throw DomainError("delay_scan: n_tot must be >= 1");
  const std::size_t per_n = cfg.delays.size();
  return parallel_map<DelayRow>(cfg.n_list.size() * per_n, [&](std::size_t idx) {
    OverlapParams ov = cfg.overlap;
    ov.delay = cfg.delays[idx % per_n];
    const double n = cfg.n_list[idx / per_n];
    DelayRow row;
    row.delay_fs = ov.delay;
    row.n = n;
    row.g_eff = effective_g(cfg.g0, ov);
    row.p_exact = accepted_probability(at(cfg.base, row.g_eff, n)).p_d;
    RandomStream stream(derive_seed(cfg.master_seed, idx));
    const ShotRecord rec = sample_counts(effective_prob(row.p_exact, cfg.noise), cfg.n_tot, stream);
    row.p_hat = static_cast<double>(rec.n_d) / static_cast<double>(rec.total());
    return row;
  });
}

double designated_g(const ScalingConfig& cfg) {
  if (cfg.delta_p_g) return *cfg.delta_p_g;
  const auto [lo, hi] = std::minmax_element(cfg.g_grid.begin(), cfg.g_grid.end());
  return 0.5 * (*lo + *hi);
}

std::vector<ScalingPoint> scaling_sweep(const ScalingConfig& cfg) {
  if (cfg.n_list.size() < 3) throw DomainError("scaling_sweep: need at least 3 photon numbers");
  if (!std::is_sorted(cfg.n_list.begin(), cfg.n_list.end())) {
    throw DomainError("scaling_sweep: n_list must be ascending");
  }
  if (cfg.g_grid.size() < 2) throw DomainError("scaling_sweep: need at least 2 g values");
  if (cfg.nu < 2) throw DomainError("scaling_sweep: nu must be >= 2");
  if (cfg.n_tot < 1) throw DomainError("scaling_sweep: n_tot must be >= 1");
  cfg.base.validate();
  cfg.noise.validate();

  const double g_star = designated_g(cfg);
  const auto node = std::find(cfg.g_grid.begin(), cfg.g_grid.end(), g_star);
  // One extra column when the designated g is not a grid node.
  const std::size_t columns = cfg.g_grid.size() + 1;
  const double n_tot = static_cast<double>(cfg.n_tot);
  const double nu = static_cast<double>(cfg.nu);

  auto sample = [&](std::size_t n_index, std::size_t column, double g) {
    const double n = cfg.n_list[n_index];
    const NoiseParams noise = n > cfg.noise_onset_n ? cfg.noise : NoiseParams{0.0, 0.5};
    const double p = effective_prob(accepted_probability(at(cfg.base, g, n)).p_d, noise);
    if (cfg.mode == SweepMode::exact) {
      return GridSample{p, std::sqrt(p * (1.0 - p) / n_tot) / std::sqrt(nu)};
    }
    const RepetitionRun run = run_repetitions_at(
        p, cfg.nu, cfg.n_tot, derive_seed(cfg.master_seed, n_index * columns + column));
    return GridSample{run.summary.p_mean, run.summary.delta_p};
  };

  return parallel_map<ScalingPoint>(cfg.n_list.size(), [&](std::size_t i) {
    std::vector<SlopePoint> slope_points;
    GridSample at_star;
    for (std::size_t j = 0; j < cfg.g_grid.size(); ++j) {
      const GridSample s = sample(i, j, cfg.g_grid[j]);
      const double w = s.delta_p > 0.0 ? 1.0 / (s.delta_p * s.delta_p) : 1.0;
      slope_points.push_back({cfg.g_grid[j], s.p, w});
      if (node != cfg.g_grid.end() && static_cast<std::size_t>(node - cfg.g_grid.begin()) == j) {
        at_star = s;
      }
    }
    if (node == cfg.g_grid.end()) at_star = sample(i, cfg.g_grid.size(), g_star);

    ScalingPoint pt;
    pt.n = cfg.n_list[i];
    pt.s_slope = fit_sensitivity(slope_points, cfg.weighting);
    pt.delta_p = at_star.delta_p;
    pt.delta_g = precision(at_star.delta_p, pt.s_slope);
    pt.f_extracted = fisher_from_prob(at_star.p, pt.s_slope);
    pt.f_extracted_per_rep = pt.f_extracted * n_tot;
    return pt;
  });
}

double operating_epsilon(const TheoryConfig& cfg, double n) {
  if (cfg.operating_point == OperatingPoint::fixed_epsilon) return cfg.base.epsilon;
  const double bulk = reduce_phase(n, std::sin(cfg.base.kappa * cfg.g));
  return cfg.target_phase - bulk;
}

std::vector<TheoryRow> theory_curve_large_n(const TheoryConfig& cfg) {
  if (!(cfg.g > 0.0)) throw DomainError("theory_curve_large_n: g must be > 0");
  cfg.base.validate();
  return parallel_map<TheoryRow>(cfg.n_grid.size(), [&](std::size_t i) {
    const double n = cfg.n_grid[i];
    if (!(n > 0.0)) throw DomainError("theory_curve_large_n: n must be > 0");
    ModelParams p = at(cfg.base, cfg.g, n);
    p.epsilon = operating_epsilon(cfg, n);
    TheoryRow row;
    row.n = n;
    const double log_f = log_fisher_projective(p);
    row.f_p = fisher_projective(p);
    row.f_p_over_n2 = std::isfinite(log_f) ? std::exp(log_f - 2.0 * std::log(n)) : 0.0;
    const double half = std::sin(0.5 * p.kappa * cfg.g);
    row.envelope = std::exp(-4.0 * n * half * half);
    return row;
  });
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("fit_power_law: size mismatch");
  if (x.size() < 3) throw DegenerateDesignError("fit_power_law: need at least 3 points");
  const double count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw DomainError("fit_power_law: values must be > 0");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateDesignError("fit_power_law: all x identical");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

PowerLawFit fit_power_law(std::span<const ScalingPoint> points, PowerLawField field) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& pt : points) {
    x.push_back(pt.n);
    switch (field) {
      case PowerLawField::delta_g:
        y.push_back(pt.delta_g);
        break;
      case PowerLawField::f_extracted_per_event:
        y.push_back(pt.f_extracted);
        break;
      case PowerLawField::f_extracted_per_rep:
        y.push_back(pt.f_extracted_per_rep);
        break;
    }
  }
  return fit_power_law(x, y);
}

}  // namespace ppcm::lab
