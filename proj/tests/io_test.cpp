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


#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include "json.hpp"
#include <sstream>

#include "ppcm/config.hpp"
#include "ppcm/errors.hpp"
#include "ppcm/manifest.hpp"
#include "ppcm/table.hpp"

namespace {

using namespace ppcm;
namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ppcm_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Config, EmptyObjectGivesDefaults) {
  const RunConfig c = parse_config("{}");
  EXPECT_EQ(to_json(c), to_json(default_config()));
  EXPECT_DOUBLE_EQ(c.theta_i, kPi / 2);
  EXPECT_DOUBLE_EQ(c.theta_f, kPi / 2);
  EXPECT_DOUBLE_EQ(c.epsilon, 0.1);
  EXPECT_EQ(c.kappa, 2);
  EXPECT_DOUBLE_EQ(c.peak_overlap, 0.77);
  EXPECT_DOUBLE_EQ(c.fwhm_pump, 150.0);
  EXPECT_DOUBLE_EQ(c.fwhm_single, 480.0);
}

TEST(Config, MergesGivenKeys) {
  const RunConfig c = parse_config(R"({"epsilon": 0.2, "n": 1e5})");
  EXPECT_DOUBLE_EQ(c.epsilon, 0.2);
  EXPECT_DOUBLE_EQ(c.n, 1e5);
  EXPECT_DOUBLE_EQ(c.kappa, 2);
}

TEST(Config, RangeErrorNamesKeyAndConstraint) {
  try {
    parse_config(R"({"theta_i": 7})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()), "theta_i ∉ [0, π]");
  }
}

TEST(Config, RejectsUnknownAndMalformed) {
  try {
    parse_config(R"({"espilon": 0.1})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("espilon"), std::string::npos);
  }
  EXPECT_THROW(parse_config("{\"n\": "), ConfigError);
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
  EXPECT_THROW(parse_config(R"({"n": "many"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"kappa": 3})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"nu": 2.5})"), ConfigError);
}

TEST(Config, RoundTripsThroughJson) {
  RunConfig c = default_config();
  c.g = 4.2e-8;
  c.n_list = {1.0, 2.0, 3.0};
  EXPECT_EQ(to_json(parse_config(to_json(c))), to_json(c));
}

TEST(Table, ShortestRoundTripDoubles) {
  for (double v : {0.1, 6.1e-8, 1.0 / 3.0, 1e300, -2.5, 0.0, 4.9e-324}) {
    const std::string s = format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_THROW(format_double(std::numeric_limits<double>::quiet_NaN()), NumericalError);
  EXPECT_EQ(format_cell(Cell{true}), "true");
  EXPECT_EQ(format_cell(Cell{std::int64_t{42}}), "42");
}

TEST(Table, HeadersAreExact) {
  EXPECT_EQ(schema_header(Schema::fi_surface), "g,epsilon,f_p,log10_f_p");
  EXPECT_EQ(schema_header(Schema::delay_scan), "delay_fs,n,g_eff,p_hat,p_exact");
  EXPECT_EQ(schema_header(Schema::scaling),
            "n,delta_g,f_extracted_per_event,f_extracted_per_rep,s_slope,delta_p");
  EXPECT_EQ(schema_header(Schema::theory_curve), "n,f_p,f_p_over_n2,envelope");
  EXPECT_EQ(schema_header(Schema::oracle_check),
            "n,g,theta_i,theta_f,epsilon,kappa,p_closed,p_oracle,abs_err,pass");
  EXPECT_EQ(schema_header(Schema::calibrate), "epsilon,p_hat,n_total,residual");
  EXPECT_EQ(schema_header(Schema::calibrate_summary), "g_hat,std_err,method");
}

TEST(Table, EmptyIsHeaderOnly) {
  Table t{{"g", "epsilon", "f_p", "log10_f_p"}, {}};
  EXPECT_EQ(render_table(t, Schema::fi_surface), "g,epsilon,f_p,log10_f_p\n");
}

TEST(Table, OneRow) {
  Table t{{"g", "epsilon", "f_p", "log10_f_p"}, {{1e-9, 0.1, 2.5e9, std::log10(2.5e9)}}};
  const std::string out = render_table(t, Schema::fi_surface);
  EXPECT_EQ(out.substr(0, out.find('\n')), "g,epsilon,f_p,log10_f_p");
  EXPECT_EQ(out.substr(out.find('\n') + 1, 15), "1e-09,0.1,2.5e+");
}

TEST(Table, SchemaMismatchNamesColumn) {
  Table t{{"g", "eps", "f_p", "log10_f_p"}, {}};
  try {
    render_table(t, Schema::fi_surface);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("eps"), std::string::npos);
  }
  Table short_row{{"g", "epsilon", "f_p", "log10_f_p"}, {{1.0, 2.0}}};
  EXPECT_THROW(render_table(short_row, Schema::fi_surface), SchemaError);
}

TEST(Table, DigestsAndAtomicWrite) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const fs::path dir = scratch("digest");
  Table t{{"n", "f_p", "f_p_over_n2", "envelope"}, {{1e4, 4e8, 4.0, 1.0}}};
  const auto a = emit_table(t, Schema::theory_curve, dir / "a.csv");
  const auto b = emit_table(t, Schema::theory_curve, dir / "b.csv");
  EXPECT_EQ(a.sha256, b.sha256);
  EXPECT_EQ(a.sha256, sha256_hex(slurp(dir / "a.csv")));
  for (const auto& e : fs::directory_iterator(dir)) {
    EXPECT_NE(e.path().extension(), ".tmp");
  }
}

TEST(Manifest, RoundTrip) {
  const fs::path dir = scratch("manifest");
  RunManifest m;
  m.subcommand = "sweep";
  m.options = {{"mode", "exact"}};
  m.config = to_json(default_config());
  m.master_seed = 18446744073709551615ull;
  m.timestamp_utc = utc_timestamp();
  m.files.push_back({"sweep.csv", sha256_hex("x")});
  write_manifest(m, dir / "m.json");
  const RunManifest r = read_manifest(dir / "m.json");
  EXPECT_EQ(r.subcommand, "sweep");
  EXPECT_EQ(r.master_seed, m.master_seed);
  EXPECT_EQ(r.version, kVersion);
  EXPECT_EQ(r.config, m.config);
  EXPECT_EQ(r.options, m.options);
  ASSERT_EQ(r.files.size(), 1u);
  EXPECT_EQ(r.files[0].sha256, m.files[0].sha256);
  EXPECT_EQ(m.timestamp_utc.back(), 'Z');
  EXPECT_THROW(read_manifest(dir / "missing.json"), ConfigError);
}

}  // namespace
