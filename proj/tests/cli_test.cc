// Copyright 2026 The ioncav Authors
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

#include "cli/commands.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ioncav/csv.hpp"

namespace fs = std::filesystem;
using ioncav::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("ioncav_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("IONCAV_OUTPUT_DIR");
  }
  void TearDown() override {
    unsetenv("IONCAV_OUTPUT_DIR");
    fs::remove_all(dir_);
  }
  fs::path write_config(const std::string& text) {
    const fs::path p = dir_ / "run.cfg";
    std::ofstream(p) << text;
    return p;
  }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, derive_reports_reference_figures) {
  const Outcome o = invoke({"derive", "-o", dir_.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("cooperativity C       = 0.52"), std::string::npos);
  EXPECT_NE(o.out.find("Purcell factor F      = 2.04"), std::string::npos);
  EXPECT_NE(o.out.find("cavity fraction beta  = 0.51"), std::string::npos);
  EXPECT_NE(o.out.find("wave packet a_c       = 26.1 nm"), std::string::npos);
  EXPECT_NE(o.out.find("contrast factor       = 0.951"), std::string::npos);
  EXPECT_NE(o.out.find("# cavity.finesse = 35000"), std::string::npos);
  const ioncav::io::CsvTable t = ioncav::io::parse_csv(slurp(dir_ / "derive.csv"));
  EXPECT_EQ(t.rows.size(), 14u);
  EXPECT_EQ(t.meta.front().second, "derive");
}

TEST_F(CliTest, validation_errors_exit_one) {
  const fs::path cfg = write_config("cavity.finesse = -1\n");
  Outcome o = invoke({"derive", "--config", cfg.string(), "-o", dir_.string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("cavity.finesse"), std::string::npos);
  EXPECT_EQ(invoke({"derive", "--config", (dir_ / "missing.cfg").string()}).code, 1);
  EXPECT_EQ(invoke({"bogus"}).code, 1);
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"spectrum", "--points", "many"}).code, 1);
  EXPECT_EQ(invoke({"spectrum", "--transition", "green", "-o", dir_.string()}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, zero_drive_spectrum_is_flat) {
  const Outcome o = invoke({"spectrum", "--omega-max-khz", "0", "--points", "21", "-o", dir_.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto t = ioncav::io::parse_csv(slurp(dir_ / "spectrum.csv"));
  for (double p : t.numeric_column("probability")) EXPECT_EQ(p, 0.0);
  EXPECT_NE(o.out.find("lorentzian.converged=false"), std::string::npos);
}

TEST_F(CliTest, spectrum_is_byte_identical_across_runs) {
  const fs::path a = dir_ / "a", b = dir_ / "b";
  const std::vector<std::string> flags = {"spectrum", "--points", "31", "--sample", "--nu-l", "0.23"};
  auto with_dir = [&](const fs::path& d) {
    auto v = flags;
    v.insert(v.end(), {"-o", d.string()});
    return v;
  };
  const Outcome first = invoke(with_dir(a));
  const Outcome second = invoke(with_dir(b));
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_EQ(slurp(a / "spectrum.csv"), slurp(b / "spectrum.csv"));
  const auto t = ioncav::io::parse_csv(slurp(a / "spectrum.csv"));
  EXPECT_FALSE(t.rows.front()[2].empty());
}

TEST_F(CliTest, output_dir_precedence) {
  const fs::path env_dir = dir_ / "env", flag_dir = dir_ / "flag", cfg_dir = dir_ / "cfg";
  const fs::path cfg = write_config("output_dir = " + cfg_dir.string() + "\n");
  ASSERT_EQ(invoke({"derive", "--config", cfg.string()}).code, 0);
  EXPECT_TRUE(fs::exists(cfg_dir / "derive.csv"));
  setenv("IONCAV_OUTPUT_DIR", env_dir.string().c_str(), 1);
  ASSERT_EQ(invoke({"derive", "--config", cfg.string()}).code, 0);
  EXPECT_TRUE(fs::exists(env_dir / "derive.csv"));
  ASSERT_EQ(invoke({"derive", "--config", cfg.string(), "--output-dir", flag_dir.string()}).code, 0);
  EXPECT_TRUE(fs::exists(flag_dir / "derive.csv"));
}

TEST_F(CliTest, fit_command_reads_spectrum_and_scan) {
  ASSERT_EQ(invoke({"spectrum", "--points", "61", "-o", dir_.string()}).code, 0);
  Outcome o = invoke({"fit", (dir_ / "spectrum.csv").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("lorentzian.converged=true"), std::string::npos);

  const fs::path cfg = write_config("motion.point_ion = true\n");
  o = invoke({"swscan", "--config", cfg.string(), "--phi-points", "6", "-o", dir_.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(dir_ / "swscan_fit.txt"));
  o = invoke({"fit", (dir_ / "swscan.csv").string(), "--model", "sin2"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto report = ioncav::io::parse_report(o.out);
  bool saw_visibility = false;
  for (const auto& [k, v] : report) {
    if (k == "sin2.visibility") {
      saw_visibility = true;
      EXPECT_GT(std::stod(v), 0.99);
    }
  }
  EXPECT_TRUE(saw_visibility);
  EXPECT_EQ(invoke({"fit", (dir_ / "swscan.csv").string(), "--model", "cubic"}).code, 1);
}

TEST_F(CliTest, failed_fit_exits_two) {
  ASSERT_EQ(invoke({"spectrum", "--omega-max-khz", "0", "--points", "21", "-o", dir_.string()}).code, 0);
  const Outcome o = invoke({"fit", (dir_ / "spectrum.csv").string()});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("did not converge"), std::string::npos);
}

TEST_F(CliTest, swscan_warns_on_saturation) {
  const fs::path cfg = write_config("motion.point_ion = true\n");
  const Outcome o = invoke({"swscan", "--config", cfg.string(), "--phi-points", "4", "--omega-max-khz", "15.5",
                            "-o", dir_.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.err.find("warning"), std::string::npos);
}
