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

// Command-line front end. Every run writes its CSV tables plus a
// <subcommand>.manifest.json into --out; passing --manifest re-runs a
// recorded invocation and checks the output digests.
//
// Exit status: 0 success, 2 configuration error, 3 numerical/domain error,
// 4 check failure (oracle mismatches or digest mismatch on replay).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppcm/config.hpp"
#include "ppcm/errors.hpp"
#include "ppcm/experiments.hpp"
#include "ppcm/manifest.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheck = 4;

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ppcm::ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ppcm::ConfigError(std::string("malformed config document: ") + e.what());
  }
}

// Flag values are JSON literals ("1e5", "[1,2]", "\"exact\""); bare words are
// taken as strings.
json parse_flag_value(const std::string& key, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    if (!text.empty() && (std::isalpha(static_cast<unsigned char>(text.front())) || text.front() == '_')) {
      return json(text);
    }
    throw ppcm::ConfigError(key + " has malformed value \"" + text + "\"");
  }
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct Invocation {
  std::string subcommand;
  json options = json::object();
  std::optional<std::string> config_path;
  std::map<std::string, std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> manifest_path;
  std::string out_dir = ".";
};

int execute(const Invocation& inv) {
  json config_doc = json::object();
  json options = inv.options;
  std::uint64_t seed = 0;
  std::optional<ppcm::RunManifest> recorded;
  std::string subcommand = inv.subcommand;

  if (inv.manifest_path) {
    if (inv.config_path || !inv.overrides.empty() || inv.seed) {
      throw ppcm::ConfigError("--manifest replays a recorded run; drop --config, --seed and key flags");
    }
    recorded = ppcm::read_manifest(*inv.manifest_path);
    if (recorded->subcommand != subcommand) {
      throw ppcm::ConfigError("manifest records subcommand " + recorded->subcommand);
    }
    config_doc = recorded->config;
    options = recorded->options;
    seed = recorded->master_seed;
  } else {
    if (inv.config_path) config_doc = read_json_file(*inv.config_path);
    if (!config_doc.is_object()) throw ppcm::ConfigError("config document must be a JSON object");
    for (const auto& [key, text] : inv.overrides) config_doc[key] = parse_flag_value(key, text);
    if (inv.seed) {
      seed = *inv.seed;
    } else {
      seed = entropy_seed();
      std::cout << "seed: " << seed << "\n";
    }
  }

  const ppcm::RunConfig cfg = ppcm::parse_config(config_doc);
  const ppcm::RunResult result = ppcm::run_experiment(subcommand, options, cfg, seed);

  const fs::path out_dir = inv.out_dir;
  ppcm::RunManifest manifest;
  manifest.subcommand = subcommand;
  manifest.options = options;
  manifest.config = ppcm::to_json(cfg);
  manifest.master_seed = seed;
  manifest.timestamp_utc = ppcm::utc_timestamp();
  for (const auto& nt : result.tables) {
    const ppcm::EmittedFile f = ppcm::emit_table(nt.table, nt.schema, out_dir / nt.file);
    manifest.files.push_back({nt.file, f.sha256});
    std::cout << "wrote " << (out_dir / nt.file).string() << "  sha256 " << f.sha256 << "\n";
  }
  ppcm::write_manifest(manifest, out_dir / (subcommand + ".manifest.json"));
  if (!result.summary.empty()) std::cout << result.summary << "\n";

  int status = result.checks_failed ? kExitCheck : kExitOk;
  if (recorded) {
    std::map<std::string, std::string> expected;
    for (const auto& f : recorded->files) expected[f.path.generic_string()] = f.sha256;
    for (const auto& f : manifest.files) {
      const auto it = expected.find(f.path.generic_string());
      const bool same = it != expected.end() && it->second == f.sha256;
      std::cout << (same ? "digest match    " : "DIGEST MISMATCH ") << f.path.string() << "\n";
      if (!same) status = kExitCheck;
    }
    if (expected.size() != manifest.files.size()) status = kExitCheck;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective photon-counting metrology simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  Invocation inv;
  std::string config_path;
  std::string manifest_path;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON run configuration");
  auto* seed_opt = app.add_option("--seed", seed, "master seed (drawn from entropy when omitted)");
  app.add_option("--manifest", manifest_path, "replay a recorded run and verify digests");
  app.add_option("--out", inv.out_dir, "output directory")->capture_default_str();

  // One flag per configuration key.
  std::map<std::string, std::string> flag_values;
  const auto defaults = ppcm::to_json(ppcm::default_config());
  for (const auto& [key, value] : defaults.items()) {
    app.add_option("--" + key, flag_values[key], "config key " + key + " (JSON literal)");
  }

  std::string quantity = "pd";
  auto* model = app.add_subcommand("model", "point evaluation: pd, fi or qfi");
  model->add_option("quantity", quantity)->check(CLI::IsMember({"pd", "fi", "qfi"}));
  app.add_subcommand("oracle-check", "closed form vs Fock-space oracle grid");
  app.add_subcommand("surface", "F_p over (g, epsilon)");
  app.add_subcommand("delay-scan", "P_d versus pump delay");
  app.add_subcommand("sweep", "precision and extracted FI versus n");
  app.add_subcommand("theory-curve", "F_p up to n = 1e15");
  std::string calib_input;
  auto* calibrate = app.add_subcommand("calibrate", "epsilon-sweep calibration of g");
  calibrate->add_option("--input", calib_input, "CSV with epsilon,p_hat,n_total (simulated when omitted)");
  std::string est_input;
  std::string est_method = "inversion";
  auto* estimate = app.add_subcommand("estimate", "estimate g from count records");
  estimate->add_option("--input", est_input, "CSV with n_d,n_r (simulated when omitted)");
  estimate->add_option("--method", est_method)->check(CLI::IsMember({"inversion", "mle"}));
  std::string fit_input;
  std::string fit_field = "delta_g";
  auto* fit = app.add_subcommand("fit-powerlaw", "log-log fit of a scaling table");
  fit->add_option("--input", fit_input, "scaling CSV");
  fit->add_option("--field", fit_field)
      ->check(CLI::IsMember({"delta_g", "f_extracted_per_event", "f_extracted_per_rep"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  inv.subcommand = app.get_subcommands().front()->get_name();
  if (!config_path.empty()) inv.config_path = config_path;
  if (!manifest_path.empty()) inv.manifest_path = manifest_path;
  if (seed_opt->count() > 0) inv.seed = seed;
  for (const auto& [key, text] : flag_values) {
    if (app.get_option("--" + key)->count() > 0) inv.overrides[key] = text;
  }
  auto absolute = [](const std::string& p) { return fs::absolute(p).string(); };
  if (inv.subcommand == "model") inv.options["quantity"] = quantity;
  if (inv.subcommand == "calibrate" && !calib_input.empty()) inv.options["input"] = absolute(calib_input);
  if (inv.subcommand == "estimate") {
    inv.options["method"] = est_method;
    if (!est_input.empty()) inv.options["input"] = absolute(est_input);
  }
  if (inv.subcommand == "fit-powerlaw") {
    inv.options["field"] = fit_field;
    if (!fit_input.empty()) inv.options["input"] = absolute(fit_input);
  }

  try {
    return execute(inv);
  } catch (const ppcm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ppcm::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
