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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ppcm/table.hpp"

namespace ppcm {

inline constexpr std::string_view kVersion = "0.1.0";

/// Everything needed to re-run a subcommand and check its outputs.
/// File paths are stored relative to the manifest's directory.
struct RunManifest {
  std::string subcommand;
  nlohmann::json options = nlohmann::json::object();  // subcommand-specific arguments
  nlohmann::json config = nlohmann::json::object();   // resolved RunConfig
  std::uint64_t master_seed = 0;
  std::string version{kVersion};
  std::string timestamp_utc;
  std::vector<EmittedFile> files;
};

/// ISO 8601, second resolution, trailing 'Z'.
std::string utc_timestamp();

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

void write_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace ppcm
