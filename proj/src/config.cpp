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

#include "ppcm/config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <string_view>

#include "ppcm/errors.hpp"

namespace ppcm {
namespace {

using nlohmann::json;

[[noreturn]] void fail(std::string_view key, std::string_view constraint) {
  throw ConfigError(std::string(key) + " " + std::string(constraint));
}

double as_number(const json& v, std::string_view key) {
  if (!v.is_number()) fail(key, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(key, "must be finite");
  return d;
}

std::uint64_t as_count(const json& v, std::string_view key) {
  const double d = as_number(v, key);
  if (d < 0.0 || d != std::floor(d) || d > 9.007199254740992e15) {
    fail(key, "must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(d);
}

std::vector<double> as_list(const json& v, std::string_view key) {
  if (!v.is_array()) fail(key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& item : v) out.push_back(as_number(item, key));
  return out;
}

std::string as_string(const json& v, std::string_view key) {
  if (!v.is_string()) fail(key, "must be a string");
  return v.get<std::string>();
}

struct Field {
  std::function<void(RunConfig&, const json&)> read;
  std::function<json(const RunConfig&)> write;
};

template <typename T>
Field number_field(T RunConfig::*member, std::string_view key) {
  return {[member, key](RunConfig& c, const json& v) {
            if constexpr (std::is_same_v<T, double>) {
              c.*member = as_number(v, key);
            } else if constexpr (std::is_same_v<T, int>) {
              const double d = as_number(v, key);
              if (d != std::floor(d)) fail(key, "must be an integer");
              c.*member = static_cast<int>(d);
            } else {
              c.*member = as_count(v, key);
            }
          },
          [member](const RunConfig& c) { return json(c.*member); }};
}

Field list_field(std::vector<double> RunConfig::*member, std::string_view key) {
  return {[member, key](RunConfig& c, const json& v) { c.*member = as_list(v, key); },
          [member](const RunConfig& c) { return json(c.*member); }};
}

const std::map<std::string, Field, std::less<>>& fields() {
  static const std::map<std::string, Field, std::less<>> table = [] {
    std::map<std::string, Field, std::less<>> t;
    t["theta_i"] = number_field(&RunConfig::theta_i, "theta_i");
    t["theta_f"] = number_field(&RunConfig::theta_f, "theta_f");
    t["epsilon"] = number_field(&RunConfig::epsilon, "epsilon");
    t["g"] = number_field(&RunConfig::g, "g");
    t["n"] = number_field(&RunConfig::n, "n");
    t["kappa"] = number_field(&RunConfig::kappa, "kappa");
    t["fwhm_pump"] = number_field(&RunConfig::fwhm_pump, "fwhm_pump");
    t["fwhm_single"] = number_field(&RunConfig::fwhm_single, "fwhm_single");
    t["peak_overlap"] = number_field(&RunConfig::peak_overlap, "peak_overlap");
    t["delay"] = number_field(&RunConfig::delay, "delay");
    t["bg_fraction"] = number_field(&RunConfig::bg_fraction, "bg_fraction");
    t["bg_prob"] = number_field(&RunConfig::bg_prob, "bg_prob");
    t["noise_onset_n"] = number_field(&RunConfig::noise_onset_n, "noise_onset_n");
    t["nu"] = number_field(&RunConfig::nu, "nu");
    t["n_tot"] = number_field(&RunConfig::n_tot, "n_tot");
    t["surface_n"] = number_field(&RunConfig::surface_n, "surface_n");
    t["surface_g_grid"] = list_field(&RunConfig::surface_g_grid, "surface_g_grid");
    t["surface_eps_grid"] = list_field(&RunConfig::surface_eps_grid, "surface_eps_grid");
    t["g0"] = number_field(&RunConfig::g0, "g0");
    t["delays"] = list_field(&RunConfig::delays, "delays");
    t["scan_n_list"] = list_field(&RunConfig::scan_n_list, "scan_n_list");
    t["g_grid"] = list_field(&RunConfig::g_grid, "g_grid");
    t["n_list"] = list_field(&RunConfig::n_list, "n_list");
    t["n_grid"] = list_field(&RunConfig::n_grid, "n_grid");
    t["target_phase"] = number_field(&RunConfig::target_phase, "target_phase");
    t["calib_n"] = number_field(&RunConfig::calib_n, "calib_n");
    t["calib_total"] = number_field(&RunConfig::calib_total, "calib_total");
    t["sweep_epsilons"] = list_field(&RunConfig::sweep_epsilons, "sweep_epsilons");
    t["oracle_tolerance"] = number_field(&RunConfig::oracle_tolerance, "oracle_tolerance");
    t["mode"] = {[](RunConfig& c, const json& v) {
                   const std::string s = as_string(v, "mode");
                   if (s == "exact") {
                     c.mode = lab::SweepMode::exact;
                   } else if (s == "monte_carlo") {
                     c.mode = lab::SweepMode::monte_carlo;
                   } else {
                     fail("mode", "must be \"exact\" or \"monte_carlo\"");
                   }
                 },
                 [](const RunConfig& c) {
                   return json(c.mode == lab::SweepMode::exact ? "exact" : "monte_carlo");
                 }};
    t["delta_p_g"] = {[](RunConfig& c, const json& v) {
                        if (v.is_null()) {
                          c.delta_p_g.reset();
                        } else {
                          c.delta_p_g = as_number(v, "delta_p_g");
                        }
                      },
                      [](const RunConfig& c) {
                        return c.delta_p_g ? json(*c.delta_p_g) : json(nullptr);
                      }};
    t["slope_weighting"] = {
        [](RunConfig& c, const json& v) {
          const std::string s = as_string(v, "slope_weighting");
          if (s == "unweighted") {
            c.slope_weighting = SlopeWeighting::unweighted;
          } else if (s == "weighted") {
            c.slope_weighting = SlopeWeighting::weighted;
          } else {
            fail("slope_weighting", "must be \"unweighted\" or \"weighted\"");
          }
        },
        [](const RunConfig& c) {
          return json(c.slope_weighting == SlopeWeighting::weighted ? "weighted" : "unweighted");
        }};
    t["operating_point"] = {
        [](RunConfig& c, const json& v) {
          const std::string s = as_string(v, "operating_point");
          if (s == "tracked") {
            c.operating_point = lab::OperatingPoint::tracked;
          } else if (s == "fixed_epsilon") {
            c.operating_point = lab::OperatingPoint::fixed_epsilon;
          } else {
            fail("operating_point", "must be \"tracked\" or \"fixed_epsilon\"");
          }
        },
        [](const RunConfig& c) {
          return json(c.operating_point == lab::OperatingPoint::tracked ? "tracked"
                                                                        : "fixed_epsilon");
        }};
    return t;
  }();
  return table;
}

void check_positive_list(const std::vector<double>& v, std::string_view key) {
  if (v.empty()) fail(key, "must not be empty");
  for (double x : v) {
    if (!(x > 0.0)) fail(key, "entries must be > 0");
  }
}

}  // namespace

ModelParams RunConfig::model() const {
  return {theta_i, theta_f, epsilon, g, n, kappa};
}

OverlapParams RunConfig::overlap() const {
  return {fwhm_pump, fwhm_single, peak_overlap, delay};
}

NoiseParams RunConfig::noise() const { return {bg_fraction, bg_prob}; }

RunConfig default_config() {
  RunConfig c;
  c.surface_g_grid = lab::log_grid(1e-12, 0.05, 121);
  c.surface_eps_grid = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  c.delays = lab::linear_grid(-1500.0, 1500.0, 31);
  c.scan_n_list = {1e5, 3e5, 6e5};
  c.g_grid = {1e-8, 2e-8, 3e-8, 4e-8, 5e-8, 6e-8};
  c.n_list = {2e4, 5e4, 1e5, 2e5, 5e5, 1e6};
  c.n_grid = lab::log_grid(1e4, 1e15, 45);
  c.sweep_epsilons = default_sweep_epsilons();
  return c;
}

void validate_config(const RunConfig& c) {
  if (!(c.theta_i >= 0.0 && c.theta_i <= kPi)) fail("theta_i", "∉ [0, π]");
  if (!(c.theta_f >= 0.0 && c.theta_f <= kPi)) fail("theta_f", "∉ [0, π]");
  if (!(c.g >= 0.0)) fail("g", "must be >= 0");
  if (!(c.n >= 0.0)) fail("n", "must be >= 0");
  if (c.kappa != 1 && c.kappa != 2) fail("kappa", "∉ {1, 2}");
  if (!(c.fwhm_pump > 0.0)) fail("fwhm_pump", "must be > 0");
  if (!(c.fwhm_single > 0.0)) fail("fwhm_single", "must be > 0");
  if (!(c.peak_overlap > 0.0 && c.peak_overlap <= 1.0)) fail("peak_overlap", "∉ (0, 1]");
  if (!(c.bg_fraction >= 0.0 && c.bg_fraction < 1.0)) fail("bg_fraction", "∉ [0, 1)");
  if (!(c.bg_prob >= 0.0 && c.bg_prob <= 1.0)) fail("bg_prob", "∉ [0, 1]");
  if (!(c.noise_onset_n >= 0.0)) fail("noise_onset_n", "must be >= 0");
  if (c.nu < 2) fail("nu", "must be >= 2");
  if (c.n_tot < 1) fail("n_tot", "must be >= 1");
  if (!(c.surface_n >= 0.0)) fail("surface_n", "must be >= 0");
  if (c.surface_g_grid.empty()) fail("surface_g_grid", "must not be empty");
  for (double g : c.surface_g_grid) {
    if (!(g >= 0.0)) fail("surface_g_grid", "entries must be >= 0");
  }
  if (c.surface_eps_grid.empty()) fail("surface_eps_grid", "must not be empty");
  if (!(c.g0 >= 0.0)) fail("g0", "must be >= 0");
  if (c.delays.empty()) fail("delays", "must not be empty");
  check_positive_list(c.scan_n_list, "scan_n_list");
  check_positive_list(c.g_grid, "g_grid");
  check_positive_list(c.n_list, "n_list");
  if (c.n_list.size() < 3) fail("n_list", "needs at least 3 entries");
  for (std::size_t i = 1; i < c.n_list.size(); ++i) {
    if (!(c.n_list[i] > c.n_list[i - 1])) fail("n_list", "must be strictly ascending");
  }
  if (c.delta_p_g && !(*c.delta_p_g > 0.0)) fail("delta_p_g", "must be > 0");
  check_positive_list(c.n_grid, "n_grid");
  if (!(c.calib_n > 0.0)) fail("calib_n", "must be > 0");
  if (c.calib_total < 1) fail("calib_total", "must be >= 1");
  if (c.sweep_epsilons.size() < 3) fail("sweep_epsilons", "needs at least 3 entries");
  if (!(c.oracle_tolerance > 0.0)) fail("oracle_tolerance", "must be > 0");
}

RunConfig parse_config(const nlohmann::json& object) {
  if (!object.is_object()) throw ConfigError("config document must be a JSON object");
  RunConfig cfg = default_config();
  const auto& table = fields();
  for (const auto& [key, value] : object.items()) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown key \"" + key + "\"");
    it->second.read(cfg, value);
  }
  validate_config(cfg);
  return cfg;
}

RunConfig parse_config(const std::string& document) {
  json parsed;
  try {
    parsed = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config document: ") + e.what());
  }
  return parse_config(parsed);
}

nlohmann::json to_json(const RunConfig& cfg) {
  json out = json::object();
  for (const auto& [key, field] : fields()) out[key] = field.write(cfg);
  return out;
}

}  // namespace ppcm
