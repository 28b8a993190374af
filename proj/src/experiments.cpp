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

#include "ppcm/experiments.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ppcm/errors.hpp"
#include "ppcm/fock_oracle.hpp"
#include "ppcm/oracle_check.hpp"
#include "ppcm/phase_model.hpp"
#include "ppcm/shot_simulator.hpp"
#include "ppcm/sweep_lab.hpp"

namespace ppcm {
namespace {

using nlohmann::json;

Table make_table(Schema s) {
  Table t;
  for (auto c : schema_columns(s)) t.columns.emplace_back(c);
  return t;
}

std::string option_string(const json& options, const std::string& key, const std::string& fallback) {
  if (!options.contains(key)) return fallback;
  if (!options[key].is_string()) throw ConfigError("option " + key + " must be a string");
  return options[key].get<std::string>();
}

struct Csv {
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Csv read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  Csv csv;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  for (std::size_t i = 0; i < header.size(); ++i) csv.index[header[i]] = i;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    csv.rows.push_back(split(line));
  }
  return csv;
}

double cell_number(const Csv& csv, const std::vector<std::string>& row, const std::string& col,
                   const std::filesystem::path& path) {
  const auto it = csv.index.find(col);
  if (it == csv.index.end()) throw ConfigError(path.string() + ": missing column " + col);
  if (it->second >= row.size()) throw ConfigError(path.string() + ": short row");
  const std::string& s = row[it->second];
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(path.string() + ": bad number \"" + s + "\" in column " + col);
  }
  return v;
}

std::uint64_t cell_count(const Csv& csv, const std::vector<std::string>& row, const std::string& col,
                         const std::filesystem::path& path) {
  const double v = cell_number(csv, row, col, path);
  if (v < 0.0 || v != std::floor(v)) throw ConfigError(path.string() + ": " + col + " must be a count");
  return static_cast<std::uint64_t>(v);
}

Table estimate_table(const EstimationResult& r) {
  Table t = make_table(Schema::estimate);
  t.rows.push_back({r.g_hat, r.std_err, std::string(method_name(r.method))});
  return t;
}

RunResult run_model(const json& options, const RunConfig& cfg) {
  const std::string quantity = option_string(options, "quantity", "pd");
  const ModelParams p = cfg.model();
  p.validate_physical();
  Table t = make_table(Schema::model_point);
  auto add = [&](const std::string& name, double value) {
    t.rows.push_back({p.theta_i, p.theta_f, p.epsilon, p.g, p.n,
                      static_cast<std::int64_t>(p.kappa), name, value});
  };
  if (quantity == "pd") {
    const ProbabilityPair pp = accepted_probability(p);
    add("p_d", pp.p_d);
    add("p_r", pp.p_r);
    add("p_d_small_g", accepted_probability_limit(p.g, p.n, p.epsilon));
    add("sensitivity", sensitivity(p));
  } else if (quantity == "fi") {
    const double f = fisher_projective(p);
    add("f_p", f);
    const double log_f = log_fisher_projective(p);
    if (std::isfinite(log_f)) add("ln_f_p", log_f);
    if (f > 0.0) add("cramer_rao_delta_g", cramer_rao(f, cfg.nu));
  } else if (quantity == "qfi") {
    const JointQfi q = quantum_fisher_joint(p.theta_i, p.n, p.kappa);
    add("q_j_as_printed", q.as_printed);
    add("q_j_generator_variance", q.generator_variance);
    for (auto src : {BudgetSource::printed, BudgetSource::oracle_calibrated}) {
      const FisherBudget b = fisher_budget_small_g(p.n, p.epsilon, p.kappa, src);
      const std::string tag = src == BudgetSource::printed ? "printed" : "calibrated";
      add("budget_" + tag + "_f_p", b.f_p.value);
      add("budget_" + tag + "_pd_qd", b.pd_qd.value);
      add("budget_" + tag + "_pr_qr", b.pr_qr.value);
      add("budget_" + tag + "_f_tot", b.f_tot.value);
      add("budget_" + tag + "_q_j", b.q_j.value);
    }
  } else {
    throw ConfigError("option quantity must be pd, fi or qfi");
  }
  RunResult r;
  r.tables.push_back({"model_" + quantity + ".csv", Schema::model_point, std::move(t)});
  return r;
}

RunResult run_oracle_check(const RunConfig& cfg) {
  const auto rows = fock::check_probabilities(fock::OracleGrid{}, cfg.oracle_tolerance);
  Table t = make_table(Schema::oracle_check);
  RunResult r;
  double worst = 0.0;
  std::size_t failures = 0;
  for (const auto& row : rows) {
    t.rows.push_back({row.n, row.g, row.theta_i, row.theta_f, row.epsilon,
                      static_cast<std::int64_t>(row.kappa), row.p_closed, row.p_oracle,
                      row.abs_err, row.pass});
    worst = std::max(worst, row.abs_err);
    if (!row.pass) ++failures;
  }
  r.checks_failed = failures > 0;
  std::ostringstream os;
  os << rows.size() << " points, max abs error " << worst << ", " << failures << " failures";
  r.summary = os.str();
  r.tables.push_back({"oracle_check.csv", Schema::oracle_check, std::move(t)});
  return r;
}

RunResult run_surface(const RunConfig& cfg) {
  ModelParams base = cfg.model();
  base.n = cfg.surface_n;
  const auto rows = lab::fi_surface(base, cfg.surface_g_grid, cfg.surface_eps_grid);
  Table t = make_table(Schema::fi_surface);
  for (const auto& row : rows) t.rows.push_back({row.g, row.epsilon, row.f_p, row.log10_f_p});
  RunResult r;
  r.tables.push_back({"fi_surface.csv", Schema::fi_surface, std::move(t)});
  return r;
}

RunResult run_delay_scan(const RunConfig& cfg, std::uint64_t seed) {
  lab::DelayScanConfig dc;
  dc.delays = cfg.delays;
  dc.n_list = cfg.scan_n_list;
  dc.g0 = cfg.g0;
  dc.base = cfg.model();
  dc.overlap = cfg.overlap();
  dc.noise = cfg.noise();
  dc.n_tot = cfg.n_tot;
  dc.master_seed = seed;
  Table t = make_table(Schema::delay_scan);
  for (const auto& row : lab::delay_scan(dc)) {
    t.rows.push_back({row.delay_fs, row.n, row.g_eff, row.p_hat, row.p_exact});
  }
  RunResult r;
  r.tables.push_back({"delay_scan.csv", Schema::delay_scan, std::move(t)});
  return r;
}

lab::ScalingConfig scaling_config(const RunConfig& cfg, std::uint64_t seed) {
  lab::ScalingConfig sc;
  sc.n_list = cfg.n_list;
  sc.g_grid = cfg.g_grid;
  sc.base = cfg.model();
  sc.noise = cfg.noise();
  sc.noise_onset_n = cfg.noise_onset_n;
  sc.nu = cfg.nu;
  sc.n_tot = cfg.n_tot;
  sc.mode = cfg.mode;
  sc.delta_p_g = cfg.delta_p_g;
  sc.weighting = cfg.slope_weighting;
  sc.master_seed = seed;
  return sc;
}

Table scaling_table(const std::vector<lab::ScalingPoint>& pts) {
  Table t = make_table(Schema::scaling);
  for (const auto& p : pts) {
    t.rows.push_back({p.n, p.delta_g, p.f_extracted, p.f_extracted_per_rep, p.s_slope, p.delta_p});
  }
  return t;
}

RunResult run_sweep(const RunConfig& cfg, std::uint64_t seed) {
  const auto pts = lab::scaling_sweep(scaling_config(cfg, seed));
  RunResult r;
  const auto fit = lab::fit_power_law(pts, lab::PowerLawField::delta_g);
  std::ostringstream os;
  os << "delta_g exponent " << fit.exponent << ", prefactor " << fit.prefactor;
  r.summary = os.str();
  r.tables.push_back({"scaling.csv", Schema::scaling, scaling_table(pts)});
  return r;
}

RunResult run_theory_curve(const RunConfig& cfg) {
  lab::TheoryConfig tc;
  tc.g = cfg.g;
  tc.n_grid = cfg.n_grid;
  tc.base = cfg.model();
  tc.operating_point = cfg.operating_point;
  tc.target_phase = cfg.target_phase;
  Table t = make_table(Schema::theory_curve);
  for (const auto& row : lab::theory_curve_large_n(tc)) {
    t.rows.push_back({row.n, row.f_p, row.f_p_over_n2, row.envelope});
  }
  RunResult r;
  r.tables.push_back({"theory_curve.csv", Schema::theory_curve, std::move(t)});
  return r;
}

RunResult run_calibrate(const json& options, const RunConfig& cfg, std::uint64_t seed) {
  const std::string input = option_string(options, "input", "");
  std::vector<SweepPoint> points;
  if (!input.empty()) {
    points = read_sweep_points(input);
  } else {
    ModelParams p = cfg.model();
    p.g = cfg.g0;
    p.n = cfg.calib_n;
    for (std::size_t i = 0; i < cfg.sweep_epsilons.size(); ++i) {
      p.epsilon = cfg.sweep_epsilons[i];
      const double p_eff = effective_prob(accepted_probability(p).p_d, cfg.noise());
      RandomStream stream(derive_seed(seed, i));
      const ShotRecord rec = sample_counts(p_eff, cfg.calib_total, stream);
      points.push_back({p.epsilon, static_cast<double>(rec.n_d) / static_cast<double>(rec.total()),
                        rec.total()});
    }
  }
  const EstimationResult fit = fit_epsilon_sweep(points, cfg.calib_n);
  const auto residuals = sweep_residuals(points, cfg.calib_n, fit.g_hat);
  Table t = make_table(Schema::calibrate);
  for (std::size_t i = 0; i < points.size(); ++i) {
    t.rows.push_back({points[i].epsilon, points[i].p_hat,
                      static_cast<std::int64_t>(points[i].total), residuals[i]});
  }
  RunResult r;
  std::ostringstream os;
  os << "g_hat " << fit.g_hat << " +- " << fit.std_err;
  r.summary = os.str();
  r.tables.push_back({"calibrate.csv", Schema::calibrate, std::move(t)});
  r.tables.push_back({"calibrate_summary.csv", Schema::calibrate_summary, estimate_table(fit)});
  return r;
}

RunResult run_estimate(const json& options, const RunConfig& cfg, std::uint64_t seed) {
  const std::string input = option_string(options, "input", "");
  const std::string method = option_string(options, "method", "inversion");
  std::vector<ShotRecord> records;
  if (!input.empty()) {
    records = read_records(input);
  } else {
    cfg.model().validate_physical();
    records = run_repetitions(cfg.model(), cfg.noise(), cfg.nu, cfg.n_tot, seed).records;
  }
  EstimationResult est;
  const double p_hat = estimate_prob(records);
  if (method == "inversion") {
    est = invert_small_g(p_hat, cfg.n, cfg.epsilon, total_events(records));
  } else if (method == "mle") {
    est = mle_g(records, cfg.model(), default_mle_bracket(p_hat, cfg.n, cfg.epsilon));
  } else {
    throw ConfigError("option method must be inversion or mle");
  }
  RunResult r;
  std::ostringstream os;
  os << "g_hat " << est.g_hat << " +- " << est.std_err;
  r.summary = os.str();
  r.tables.push_back({"estimate.csv", Schema::estimate, estimate_table(est)});
  return r;
}

RunResult run_fit_powerlaw(const json& options) {
  const std::string input = option_string(options, "input", "");
  if (input.empty()) throw ConfigError("fit-powerlaw needs an input scaling table");
  const std::string field = option_string(options, "field", "delta_g");
  lab::PowerLawField f;
  if (field == "delta_g") {
    f = lab::PowerLawField::delta_g;
  } else if (field == "f_extracted_per_event") {
    f = lab::PowerLawField::f_extracted_per_event;
  } else if (field == "f_extracted_per_rep") {
    f = lab::PowerLawField::f_extracted_per_rep;
  } else {
    throw ConfigError("option field must be delta_g, f_extracted_per_event or f_extracted_per_rep");
  }
  const auto pts = read_scaling(input);
  const auto fit = lab::fit_power_law(pts, f);
  Table t = make_table(Schema::power_law);
  t.rows.push_back({field, fit.exponent, fit.prefactor, fit.r_squared});
  RunResult r;
  std::ostringstream os;
  os << field << " ~ " << fit.prefactor << " n^" << fit.exponent << " (r2 " << fit.r_squared << ")";
  r.summary = os.str();
  r.tables.push_back({"power_law.csv", Schema::power_law, std::move(t)});
  return r;
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"model", "oracle-check", "surface", "delay-scan", "sweep",
          "theory-curve", "calibrate", "estimate", "fit-powerlaw"};
}

RunResult run_experiment(std::string_view subcommand, const json& options, const RunConfig& cfg,
                         std::uint64_t master_seed) {
  if (subcommand == "model") return run_model(options, cfg);
  if (subcommand == "oracle-check") return run_oracle_check(cfg);
  if (subcommand == "surface") return run_surface(cfg);
  if (subcommand == "delay-scan") return run_delay_scan(cfg, master_seed);
  if (subcommand == "sweep") return run_sweep(cfg, master_seed);
  if (subcommand == "theory-curve") return run_theory_curve(cfg);
  if (subcommand == "calibrate") return run_calibrate(options, cfg, master_seed);
  if (subcommand == "estimate") return run_estimate(options, cfg, master_seed);
  if (subcommand == "fit-powerlaw") return run_fit_powerlaw(options);
  throw ConfigError("unknown subcommand " + std::string(subcommand));
}

std::vector<SweepPoint> read_sweep_points(const std::filesystem::path& path) {
  const Csv csv = read_csv(path);
  std::vector<SweepPoint> out;
  for (const auto& row : csv.rows) {
    out.push_back({cell_number(csv, row, "epsilon", path), cell_number(csv, row, "p_hat", path),
                   cell_count(csv, row, "n_total", path)});
  }
  return out;
}

std::vector<ShotRecord> read_records(const std::filesystem::path& path) {
  const Csv csv = read_csv(path);
  std::vector<ShotRecord> out;
  for (const auto& row : csv.rows) {
    out.push_back({cell_count(csv, row, "n_d", path), cell_count(csv, row, "n_r", path), 0});
  }
  return out;
}

std::vector<lab::ScalingPoint> read_scaling(const std::filesystem::path& path) {
  const Csv csv = read_csv(path);
  std::vector<lab::ScalingPoint> out;
  for (const auto& row : csv.rows) {
    lab::ScalingPoint p;
    p.n = cell_number(csv, row, "n", path);
    p.delta_g = cell_number(csv, row, "delta_g", path);
    p.f_extracted = cell_number(csv, row, "f_extracted_per_event", path);
    p.f_extracted_per_rep = cell_number(csv, row, "f_extracted_per_rep", path);
    p.s_slope = cell_number(csv, row, "s_slope", path);
    p.delta_p = cell_number(csv, row, "delta_p", path);
    out.push_back(p);
  }
  return out;
}

}  // namespace ppcm
