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

// CSV tables with fixed per-experiment headers, written atomically and
// fingerprinted with SHA-256.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ppcm {

enum class Schema {
  fi_surface,
  delay_scan,
  scaling,
  theory_curve,
  oracle_check,
  calibrate,
  calibrate_summary,
  estimate,
  model_point,
  power_law,
};

std::string_view schema_name(Schema s);
std::span<const std::string_view> schema_columns(Schema s);
/// The exact header line (no trailing newline).
std::string schema_header(Schema s);

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);
std::string format_cell(const Cell& c);

/// Header line followed by one line per row, '\n' terminated.
/// Throws SchemaError naming the offending column when the table does not
/// match the schema, NumericalError on a non-finite value.
std::string render_table(const Table& table, Schema schema);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

struct EmittedFile {
  std::filesystem::path path;
  std::string sha256;
};

/// Writes via a temporary file and rename.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

EmittedFile emit_table(const Table& table, Schema schema, const std::filesystem::path& destination);

}  // namespace ppcm
