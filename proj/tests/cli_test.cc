// Copyright 2026 The Benders Filter Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Tests of the C interface and of the command-line tool as a process.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "benders_filter.h"
#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

struct Command {
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

Command RunCli(const std::string& args) {
  const std::string line = std::string(BENDERS_CLI_PATH) + " " + args + " 2>&1";
  Command out;
  FILE* pipe = popen(line.c_str(), "r");
  if (pipe == nullptr) return out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    out.output.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  out.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  return fields;
}

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            ("benders_cli_" + std::to_string(getpid()) + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

// Writes `count` small instances into `dir` through the C interface.
void Generate(const fs::path& dir, int count, uint64_t seed) {
  bf_generate_params p;
  bf_generate_params_init(&p);
  p.n_nodes = 6;
  p.n_arcs = 8;
  p.n_switchable = 2;
  p.n_scenarios = 5;
  p.seed = seed;
  ASSERT_EQ(bf_generate_files(&p, count, "inst", dir.c_str()), BF_OK)
      << bf_last_error();
}

TEST(CApiTest, SolveMatchesExtensiveForm) {
  bf_generate_params p;
  bf_generate_params_init(&p);
  p.seed = 3;
  bf_instance* inst = nullptr;
  ASSERT_EQ(bf_instance_generate(&p, &inst), BF_OK);
  int nodes = 0, arcs = 0, switchable = 0, scenarios = 0;
  ASSERT_EQ(bf_instance_dims(inst, &nodes, &arcs, &switchable, &scenarios),
            BF_OK);
  EXPECT_EQ(nodes, p.n_nodes);
  EXPECT_EQ(arcs, p.n_arcs);
  EXPECT_EQ(switchable, p.n_switchable);
  EXPECT_EQ(scenarios, p.n_scenarios);

  double oracle = 0.0;
  ASSERT_EQ(bf_solve_extensive(inst, &oracle), BF_OK);
  bf_solve_options opts;
  bf_solve_options_init(&opts);
  opts.strategy = "hybrid+";
  bf_result* result = nullptr;
  ASSERT_EQ(bf_solve(inst, &opts, &result), BF_OK) << bf_last_error();
  EXPECT_EQ(bf_result_status(result), BF_RUN_OPTIMAL);
  EXPECT_NEAR(bf_result_objective(result), oracle,
              1e-6 * std::fmax(1.0, std::fabs(oracle)));
  EXPECT_LE(bf_result_gap(result), 1e-6);
  EXPECT_GE(bf_result_time(result), 0.0);
  EXPECT_STREQ(bf_result_error(result), "");
  const int n = bf_result_num_iterations(result);
  ASSERT_GE(n, 1);
  int64_t cuts = 0;
  for (int i = 0; i < n; ++i) {
    bf_iteration it;
    ASSERT_EQ(bf_result_iteration(result, i, &it), BF_OK);
    EXPECT_EQ(it.iteration, i + 1);
    cuts += it.n_selected;
  }
  EXPECT_EQ(cuts, bf_result_total_cuts(result));
  bf_iteration it;
  EXPECT_EQ(bf_result_iteration(result, n, &it), BF_INVALID_ARGUMENT);
  int length = 0;
  ASSERT_EQ(bf_result_incumbent(result, nullptr, 0, &length), BF_OK);
  EXPECT_GT(length, 0);
  std::vector<double> values(length);
  ASSERT_EQ(bf_result_incumbent(result, values.data(), length, &length), BF_OK);
  EXPECT_STREQ(bf_run_status_name(bf_result_status(result)), "Optimal");
  bf_result_free(result);
  bf_instance_free(inst);
}

TEST(CApiTest, FullFractionSelectsEveryViolatedCut) {
  bf_generate_params p;
  bf_generate_params_init(&p);
  p.n_scenarios = 6;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    p.seed = seed;
    bf_instance* inst = nullptr;
    ASSERT_EQ(bf_instance_generate(&p, &inst), BF_OK);
    bf_solve_options opts;
    bf_solve_options_init(&opts);
    opts.strategy = "violation@frac:1";
    bf_result* result = nullptr;
    ASSERT_EQ(bf_solve(inst, &opts, &result), BF_OK);
    EXPECT_EQ(bf_result_status(result), BF_RUN_OPTIMAL);
    for (int i = 0; i + 1 < bf_result_num_iterations(result); ++i) {
      bf_iteration it;
      ASSERT_EQ(bf_result_iteration(result, i, &it), BF_OK);
      EXPECT_EQ(it.n_selected, it.n_violated);
      EXPECT_EQ(it.n_optimality_selected, it.n_violated_optimality);
    }
    bf_result_free(result);
    bf_instance_free(inst);
  }
}

TEST(CApiTest, ErrorsAreReported) {
  bf_generate_params p;
  bf_generate_params_init(&p);
  p.n_arcs = 1;
  bf_instance* inst = nullptr;
  EXPECT_EQ(bf_instance_generate(&p, &inst), BF_INVALID_PARAMS);
  EXPECT_EQ(inst, nullptr);
  EXPECT_NE(std::string(bf_last_error()).find("n_arcs"), std::string::npos);
  EXPECT_EQ(bf_instance_read("/nonexistent/x.json", &inst), BF_IO_ERROR);
  EXPECT_EQ(bf_instance_generate(nullptr, &inst), BF_INVALID_ARGUMENT);
  char canonical[64];
  EXPECT_EQ(bf_strategy_validate("hybrid+", canonical, sizeof canonical),
            BF_OK);
  EXPECT_STREQ(canonical, "hybrid+@frac:0.05");
  EXPECT_EQ(bf_strategy_validate("violation@fixed:0", nullptr, 0),
            BF_INVALID_ARGUMENT);
  EXPECT_STREQ(bf_status_name(BF_UNKNOWN_BASELINE), "UnknownBaseline");

  bf_generate_params_init(&p);
  ASSERT_EQ(bf_instance_generate(&p, &inst), BF_OK);
  bf_solve_options opts;
  bf_solve_options_init(&opts);
  opts.time_limit = -1.0;
  bf_result* result = nullptr;
  EXPECT_EQ(bf_solve(inst, &opts, &result), BF_INVALID_ARGUMENT);
  EXPECT_EQ(result, nullptr);
  opts.time_limit = 60.0;
  opts.strategy = "bogus";
  EXPECT_EQ(bf_solve(inst, &opts, &result), BF_INVALID_ARGUMENT);
  bf_instance_free(inst);
}

TEST(CApiTest, InstanceFileRoundTrip) {
  TempDir dir;
  bf_generate_params p;
  bf_generate_params_init(&p);
  bf_instance* inst = nullptr;
  ASSERT_EQ(bf_instance_generate(&p, &inst), BF_OK);
  const std::string path = (dir.path() / "a.json").string();
  ASSERT_EQ(bf_instance_write(inst, path.c_str()), BF_OK);
  bf_instance* back = nullptr;
  ASSERT_EQ(bf_instance_read(path.c_str(), &back), BF_OK);
  const std::string again = (dir.path() / "b.json").string();
  ASSERT_EQ(bf_instance_write(back, again.c_str()), BF_OK);
  EXPECT_EQ(ReadFile(path), ReadFile(again));
  bf_instance_free(inst);
  bf_instance_free(back);
}

TEST(CliTest, GenerateIsByteIdentical) {
  TempDir dir;
  const std::string args =
      "generate --nodes 6 --arcs 8 --switchable 2 --scenarios 4 --count 3 "
      "--seed 1 --out ";
  ASSERT_EQ(RunCli(args + dir.str() + "/a").exit_code, 0);
  ASSERT_EQ(RunCli(args + dir.str() + "/b").exit_code, 0);
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dir.path() / "a")) {
    ++files;
    const fs::path twin = dir.path() / "b" / entry.path().filename();
    ASSERT_TRUE(fs::exists(twin));
    EXPECT_EQ(ReadFile(entry.path()), ReadFile(twin));
  }
  EXPECT_EQ(files, 3);
}

TEST(CliTest, InvalidParametersAreNamed) {
  TempDir dir;
  const Command c = RunCli("generate --nodes 4 --arcs 2 --out " + dir.str());
  EXPECT_NE(c.exit_code, 0);
  EXPECT_NE(c.output.find("n_arcs"), std::string::npos) << c.output;
  const Command s = RunCli("generate --nodes 1 --out " + dir.str());
  EXPECT_NE(s.exit_code, 0);
  EXPECT_NE(s.output.find("n_nodes"), std::string::npos) << s.output;
  const Command strategy =
      RunCli("solve --instances '" + dir.str() + "/*.json' --strategy greedy");
  EXPECT_EQ(strategy.exit_code, 1);
  EXPECT_EQ(RunCli("frobnicate").exit_code, 1);
}

TEST(CliTest, SolveExitCodes) {
  TempDir dir;
  Generate(dir.path(), 2, 4);
  const std::string glob = " --instances '" + dir.str() + "/*.json'";
  const Command ok =
      RunCli("solve" + glob + " --strategy hybrid+ --check-oracle");
  EXPECT_EQ(ok.exit_code, 0) << ok.output;
  EXPECT_NE(ok.output.find("Optimal"), std::string::npos) << ok.output;
  const Command limited =
      RunCli("solve" + glob + " --strategy violation@fixed:1 --max-iters 1");
  EXPECT_EQ(limited.exit_code, 2) << limited.output;
  const Command missing =
      RunCli("solve --instances '" + dir.str() + "/*.nope'");
  EXPECT_EQ(missing.exit_code, 1);
}

TEST(CliTest, BenchmarkCartesianProduct) {
  TempDir dir;
  Generate(dir.path() / "inst", 2, 9);
  const fs::path out = dir.path() / "out";
  const std::string args = "benchmark --instances '" + dir.str() +
                           "/inst/*.json' --configs default,hybrid+ --out " +
                           out.string();
  const Command c = RunCli(args);
  ASSERT_EQ(c.exit_code, 0) << c.output;
  const std::vector<std::string> rows = Lines(ReadFile(out / "results.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0],
            "instance,config,status,time_s,iterations,total_cuts,objective,"
            "gap");
  for (size_t i = 1; i < rows.size(); ++i) {
    const std::vector<std::string> f = Split(rows[i]);
    ASSERT_EQ(f.size(), 8u);
    EXPECT_EQ(f[2], "Optimal");
  }
  EXPECT_TRUE(fs::exists(out / "summary.csv"));
  EXPECT_TRUE(fs::exists(out / "profile.csv"));
  const std::vector<std::string> summary = Lines(ReadFile(out / "summary.csv"));
  EXPECT_EQ(summary.size(), 3u);

  // Same seeds again: identical apart from the timing column.
  const fs::path out2 = dir.path() / "out2";
  ASSERT_EQ(
      RunCli("benchmark --instances '" + dir.str() +
             "/inst/*.json' --configs default,hybrid+ --out " + out2.string())
          .exit_code,
      0);
  const std::vector<std::string> rerun = Lines(ReadFile(out2 / "results.csv"));
  ASSERT_EQ(rerun.size(), rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> a = Split(rows[i]);
    std::vector<std::string> b = Split(rerun[i]);
    a.erase(a.begin() + 3);
    b.erase(b.begin() + 3);
    EXPECT_EQ(a, b);
  }

  // The report command rebuilds the summary from the results alone.
  const fs::path rep = dir.path() / "report";
  ASSERT_EQ(RunCli("report --results " + (out / "results.csv").string() +
                   " --out " + rep.string())
                .exit_code,
            0);
  EXPECT_EQ(ReadFile(rep / "summary.csv"), ReadFile(out / "summary.csv"));
  const Command bad_base =
      RunCli("report --results " + (out / "results.csv").string() +
             " --baseline nope --out " + rep.string());
  EXPECT_NE(bad_base.exit_code, 0);
}

TEST(CliTest, SweepCellCounts) {
  TempDir dir;
  Generate(dir.path() / "inst", 2, 12);
  const std::string inst = " --instances '" + dir.str() + "/inst/*.json'";
  const fs::path out = dir.path() / "grid";
  const Command c = RunCli("sweep" + inst +
                           " --min-time-filter 0"
                           " --grid 'fixed:1,2;frac:0.05,1;vfrac:0.25,0.5'"
                           " --out " +
                           out.string());
  ASSERT_EQ(c.exit_code, 0) << c.output;
  const std::vector<std::string> cells = Lines(ReadFile(out / "sweep.csv"));
  ASSERT_EQ(cells.size(), 1u + 6u + 1u);
  EXPECT_EQ(cells[0], "mode,value,geomean_ratio,p_value");
  EXPECT_EQ(Split(cells[1])[0], "baseline");
  EXPECT_EQ(Split(cells[1])[2], "1.0000");
  for (size_t i = 2; i < cells.size(); ++i) {
    const double ratio = std::stod(Split(cells[i])[2]);
    EXPECT_TRUE(std::isfinite(ratio) && ratio > 0.0) << cells[i];
  }
  const std::vector<std::string> results =
      Lines(ReadFile(out / "sweep_results.csv"));
  EXPECT_EQ(results.size(), 1u + 2u * 7u);

  const fs::path only = dir.path() / "only";
  ASSERT_EQ(
      RunCli("sweep" + inst + " --grid '' --out " + only.string()).exit_code,
      0);
  const std::vector<std::string> single = Lines(ReadFile(only / "sweep.csv"));
  ASSERT_EQ(single.size(), 2u);
  EXPECT_EQ(Split(single[1])[2], "1.0000");
  EXPECT_NE(RunCli("sweep" + inst + " --grid 'fixed:0' --out " + only.string())
                .exit_code,
            0);
}

}  // namespace
