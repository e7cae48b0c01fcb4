// Copyright 2026 The qrb Authors
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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

#ifndef QRB_CLI_PATH
#error "QRB_CLI_PATH must point at the qrb executable"
#endif

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("qrb_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(QRB_CLI_PATH) + " " + args + " >" + (dir_ / "stdout.txt").string() +
                            " 2>" + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  std::string slurp(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void write(const std::string& name, const std::string& body) const { std::ofstream(path(name)) << body; }

  fs::path dir_;
};

TEST_F(Cli, RbWritesContractFiles) {
  ASSERT_EQ(run("rb --config paper_defaults --seed 1 --ensemble 10 --out " + path("a").string()), 0);
  for (const char* f : {"rb_results.csv", "rb_average.csv", "plot_rb.csv", "rb_fit.json", "rb_meta.json"}) {
    EXPECT_TRUE(fs::exists(path("a") / f)) << f;
  }
  const json fit = json::parse(slurp(path("a") / "rb_fit.json"));
  EXPECT_TRUE(fit.contains("e_g"));
  EXPECT_EQ(slurp(path("a") / "rb_results.csv").substr(0, 42), "cg_id,pr_id,truncation,fidelity,std_error\n");
  EXPECT_EQ(slurp(path("a") / "plot_rb.csv").substr(0, 9), "x,y,yerr\n");
}

TEST_F(Cli, OutputsIndependentOfWorkersAndRepeatable) {
  const std::string base = "rb --config paper_defaults --seed 3 --ensemble 8 --out ";
  ASSERT_EQ(run(base + path("w1").string() + " --workers 1"), 0);
  ASSERT_EQ(run(base + path("w3").string() + " --workers 3"), 0);
  ASSERT_EQ(run(base + path("again").string() + " --workers 1"), 0);
  const std::string ref = slurp(path("w1") / "rb_results.csv");
  EXPECT_FALSE(ref.empty());
  EXPECT_EQ(slurp(path("w3") / "rb_results.csv"), ref);
  EXPECT_EQ(slurp(path("again") / "rb_results.csv"), ref);
  EXPECT_EQ(slurp(path("w3") / "rb_fit.json"), slurp(path("w1") / "rb_fit.json"));
}

TEST_F(Cli, SidecarReproducesRun) {
  ASSERT_EQ(run("hold-time --config paper_defaults --seed 5 --ensemble 6 --out " + path("first").string()), 0);
  ASSERT_EQ(run("hold-time --config " + (path("first") / "hold_time_meta.json").string() + " --out " +
                path("second").string()),
            0);
  const std::string a = slurp(path("first") / "hold_time.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(slurp(path("second") / "hold_time.csv"), a);
}

TEST_F(Cli, FitRoundTripsRbOutput) {
  ASSERT_EQ(run("rb --config paper_defaults --ensemble 10 --out " + path("rb").string()), 0);
  ASSERT_EQ(run("fit --model rb --in " + (path("rb") / "rb_results.csv").string() + " --out " +
                path("refit.json").string()),
            0);
  const json a = json::parse(slurp(path("rb") / "rb_fit.json"));
  const json b = json::parse(slurp(path("refit.json")));
  EXPECT_NEAR(b["params"]["d"].get<double>(), a["params"]["d"].get<double>(), 1e-12);
  EXPECT_NEAR(b["params"]["d_if"].get<double>(), a["params"]["d_if"].get<double>(), 1e-12);
}

TEST_F(Cli, FitDigitizedDecay) {
  std::string csv = "truncation,fidelity,std_error\n";
  for (int l : {1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 145, 235, 380, 615, 995}) {
    std::ostringstream row;
    row.precision(17);
    row << l << "," << 0.5 + 0.5 * (1 - 1.8e-2) * std::pow(1 - 2.7e-4, l) << ",0.002\n";
    csv += row.str();
  }
  write("digitized.csv", csv);
  ASSERT_EQ(run("fit --model rb --in " + path("digitized.csv").string() + " --out " + path("f.json").string()), 0);
  EXPECT_NEAR(json::parse(slurp(path("f.json")))["e_g"].get<double>(), 1.35e-4, 1e-10);
}

TEST_F(Cli, InputErrorsExitTwo) {
  write("empty.csv", "");
  EXPECT_EQ(run("fit --model rb --in " + path("empty.csv").string()), 2);
  write("bad.csv", "x,y\n1,2\n3,oops\n");
  EXPECT_EQ(run("fit --model gaussian --in " + path("bad.csv").string()), 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("row 3"), std::string::npos);
  EXPECT_EQ(run("fit --model rb --in " + path("missing.csv").string()), 2);

  write("cfg.json", "{\n  \"seed\": 1,\n  \"noise\": {\"t2\": 0.3}\n}\n");
  EXPECT_EQ(run("rb --config " + path("cfg.json").string() + " --out " + path("o").string()), 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("cfg.json:3"), std::string::npos) << slurp(path("stderr.txt"));
  EXPECT_EQ(run("rb --config no_such_preset"), 2);
  EXPECT_EQ(run("rb --ensemble 0"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(Cli, UnidentifiableFitExitsThree) {
  write("flat.csv", "x,y\n0,0.5\n1,0.5\n2,0.5\n3,0.5\n4,0.5\n");
  EXPECT_EQ(run("fit --model gaussian --in " + path("flat.csv").string() + " --out " + path("g.json").string()), 3);
  EXPECT_TRUE(fs::exists(path("g.json")));
}

TEST_F(Cli, EchoRecoversT2) {
  ASSERT_EQ(run("echo --config paper_defaults --ensemble 100 --out " + path("e").string()), 0);
  const json fit = json::parse(slurp(path("e") / "echo_fit.json"));
  EXPECT_NEAR(fit["params"]["tau_s"].get<double>(), 0.28, 0.15 * 0.28);
  EXPECT_EQ(slurp(path("e") / "echo_amplitudes.csv").substr(0, 30), "T_s,amplitude,std_error,flagge");
}

}  // namespace
