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

// Subcommand bodies: each turns a resolved configuration, a master seed and
// subcommand options into named CSV tables.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ppcm/config.hpp"
#include "ppcm/estimators.hpp"
#include "ppcm/table.hpp"

namespace ppcm {

struct NamedTable {
  std::string file;
  Schema schema;
  Table table;
};

struct RunResult {
  std::vector<NamedTable> tables;
  bool checks_failed = false;  // oracle-check mismatches
  std::string summary;         // short human-readable report
};

/// Subcommand names accepted by run_experiment.
std::vector<std::string> experiment_names();

/// Throws ConfigError for an unknown subcommand or bad option.
RunResult run_experiment(std::string_view subcommand, const nlohmann::json& options,
                         const RunConfig& cfg, std::uint64_t master_seed);

/// Reads `epsilon,p_hat,n_total` rows (extra columns ignored).
std::vector<SweepPoint> read_sweep_points(const std::filesystem::path& path);
/// Reads `n_d,n_r` rows.
std::vector<ShotRecord> read_records(const std::filesystem::path& path);
/// Reads a scaling table.
std::vector<lab::ScalingPoint> read_scaling(const std::filesystem::path& path);

}  // namespace ppcm
