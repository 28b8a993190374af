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

#include "ppcm/table.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "ppcm/errors.hpp"

namespace ppcm {
namespace {

using namespace std::string_view_literals;

constexpr std::array kSurface = {"g"sv, "epsilon"sv, "f_p"sv, "log10_f_p"sv};
constexpr std::array kDelay = {"delay_fs"sv, "n"sv, "g_eff"sv, "p_hat"sv, "p_exact"sv};
constexpr std::array kScaling = {"n"sv,           "delta_g"sv, "f_extracted_per_event"sv,
                                 "f_extracted_per_rep"sv, "s_slope"sv, "delta_p"sv};
constexpr std::array kTheory = {"n"sv, "f_p"sv, "f_p_over_n2"sv, "envelope"sv};
constexpr std::array kOracle = {"n"sv,     "g"sv,        "theta_i"sv,  "theta_f"sv, "epsilon"sv,
                                "kappa"sv, "p_closed"sv, "p_oracle"sv, "abs_err"sv, "pass"sv};
constexpr std::array kCalibrate = {"epsilon"sv, "p_hat"sv, "n_total"sv, "residual"sv};
constexpr std::array kEstimate = {"g_hat"sv, "std_err"sv, "method"sv};
constexpr std::array kModelPoint = {"theta_i"sv, "theta_f"sv, "epsilon"sv, "g"sv,
                                    "n"sv,       "kappa"sv,   "quantity"sv, "value"sv};
constexpr std::array kPowerLaw = {"field"sv, "exponent"sv, "prefactor"sv, "r_squared"sv};

}  // namespace

std::string_view schema_name(Schema s) {
  switch (s) {
    case Schema::fi_surface:
      return "fi_surface";
    case Schema::delay_scan:
      return "delay_scan";
    case Schema::scaling:
      return "scaling";
    case Schema::theory_curve:
      return "theory_curve";
    case Schema::oracle_check:
      return "oracle_check";
    case Schema::calibrate:
      return "calibrate";
    case Schema::calibrate_summary:
      return "calibrate_summary";
    case Schema::estimate:
      return "estimate";
    case Schema::model_point:
      return "model_point";
    case Schema::power_law:
      return "power_law";
  }
  return "unknown";
}

std::span<const std::string_view> schema_columns(Schema s) {
  switch (s) {
    case Schema::fi_surface:
      return kSurface;
    case Schema::delay_scan:
      return kDelay;
    case Schema::scaling:
      return kScaling;
    case Schema::theory_curve:
      return kTheory;
    case Schema::oracle_check:
      return kOracle;
    case Schema::calibrate:
      return kCalibrate;
    case Schema::calibrate_summary:
    case Schema::estimate:
      return kEstimate;
    case Schema::model_point:
      return kModelPoint;
    case Schema::power_law:
      return kPowerLaw;
  }
  return {};
}

std::string schema_header(Schema s) {
  std::string out;
  for (const auto col : schema_columns(s)) {
    if (!out.empty()) out += ',';
    out += col;
  }
  return out;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) throw NumericalError("non-finite value in table");
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return v;
        }
      },
      c);
}

std::string render_table(const Table& table, Schema schema) {
  const auto expected = schema_columns(schema);
  const std::size_t common = std::min(expected.size(), table.columns.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (table.columns[i] != expected[i]) {
      throw SchemaError("table does not match schema " + std::string(schema_name(schema)) +
                        ": column " + std::to_string(i) + " is \"" + table.columns[i] +
                        "\", expected \"" + std::string(expected[i]) + "\"");
    }
  }
  if (table.columns.size() < expected.size()) {
    throw SchemaError("table does not match schema " + std::string(schema_name(schema)) +
                      ": missing column \"" + std::string(expected[common]) + "\"");
  }
  if (table.columns.size() > expected.size()) {
    throw SchemaError("table does not match schema " + std::string(schema_name(schema)) +
                      ": unexpected column \"" + table.columns[common] + "\"");
  }
  std::string out = schema_header(schema);
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != expected.size()) {
      const std::size_t at = std::min(row.size(), expected.size() - 1);
      throw SchemaError("row has " + std::to_string(row.size()) + " cells; column \"" +
                        std::string(expected[at]) + "\" is " +
                        (row.size() < expected.size() ? "missing" : "followed by extra cells"));
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw Error("sha256: digest computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

EmittedFile emit_table(const Table& table, Schema schema,
                       const std::filesystem::path& destination) {
  const std::string text = render_table(table, schema);
  write_atomic(destination, text);
  return {destination, sha256_hex(text)};
}

}  // namespace ppcm
