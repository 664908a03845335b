// Copyright 2026 The reachcert Authors
//
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

#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

#ifdef REACHCERT_CLI_PATH

using namespace reachcert;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

TEST_CASE("check: reachable free-evolution target exits 0") {
  testutil::TempDir tmp;
  const std::string args =
      "check --drift gad:gamma=1,p=0.75 "
      "--target gad:gamma=1,p=0.75,time=1.2 --out " +
      tmp.path().string();
  std::string out, err;
  const int rc = testutil::run_cli(args, tmp.path(), &out, &err);
  CHECK(rc == 0);
  nlohmann::json report =
      nlohmann::json::parse(testutil::slurp(tmp.path() / "report.json"));
  CHECK(report.at("overall").get<bool>());
  CHECK(report.at("det_time").at("pass").get<bool>());
}

TEST_CASE("check: excluded target exits 2 and records the failure") {
  testutil::TempDir tmp;
  // A pure steady state at long times beats the drift's purity ceiling.
  const std::string args =
      "check --drift gad:gamma=1,p=0.75 "
      "--target gad:gamma=1,p=1.0,time=8 --out " +
      tmp.path().string();
  std::string out, err;
  const int rc = testutil::run_cli(args, tmp.path(), &out, &err);
  CHECK(rc == 2);
  nlohmann::json report =
      nlohmann::json::parse(testutil::slurp(tmp.path() / "report.json"));
  CHECK_FALSE(report.at("overall").get<bool>());
}

TEST_CASE("check: without --out the report goes to stdout") {
  testutil::TempDir tmp;
  std::string out, err;
  const int rc = testutil::run_cli(
      "check --drift gad:gamma=1,p=0.75 --target gad:gamma=1,p=0.75,time=0.9",
      tmp.path(), &out, &err);
  CHECK(rc == 0);
  nlohmann::json report = nlohmann::json::parse(out);
  CHECK(report.at("overall").get<bool>());
}

TEST_CASE("check: unknown family is a usage error") {
  testutil::TempDir tmp;
  std::string out, err;
  const int rc = testutil::run_cli(
      "check --drift nosuchfamily:gamma=1 --target gad:gamma=1,p=0.75,time=1",
      tmp.path(), &out, &err);
  CHECK(rc == 1);
  CHECK(err.find("error:") != std::string::npos);
}

TEST_CASE("synth: schedule file reproduces the target channel") {
  testutil::TempDir tmp;
  std::mt19937_64 gen(31);
  SuperOpMatrix l0 = testutil::generator_of(dephasing(1.0));
  SuperOpMatrix target = testutil::mixed_permutation_target(gen, l0);
  const fs::path target_path = tmp.path() / "target.json";
  {
    std::ofstream f(target_path);
    f << superop_to_json(target);
  }

  std::string out, err;
  const int rc = testutil::run_cli("synth --drift dephasing:gamma=1 --target " +
                                       target_path.string() +
                                       " --time 1.0 --out " +
                                       tmp.path().string(),
                                   tmp.path(), &out, &err);
  CHECK(rc == 0);

  ControlSchedule schedule =
      schedule_from_json(testutil::slurp(tmp.path() / "schedule.json"));
  SuperOpMatrix executed = execute_schedule(l0, schedule);
  RealMatrix want = expm(RealMatrix(target.mat * 1.0));
  CHECK((executed.mat - want).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("synth: infeasible pair exits 2 with a reason") {
  testutil::TempDir tmp;
  std::string out, err;
  const int rc = testutil::run_cli(
      "synth --drift depolarizing:gamma=0.5 --target dephasing:gamma=0.5 "
      "--time 1.0 --out " +
          tmp.path().string(),
      tmp.path(), &out, &err);
  CHECK(rc == 2);
  CHECK(out.find("not reachable") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp.path() / "schedule.json"));
}

TEST_CASE("simulate: channel file matches the exact exponential") {
  testutil::TempDir tmp;
  std::string out, err;
  const int rc = testutil::run_cli(
      "simulate --drift dephasing:gamma=0.9 --time 0.5 --out " +
          tmp.path().string(),
      tmp.path(), &out, &err);
  CHECK(rc == 0);
  SuperOpMatrix channel =
      superop_from_json(testutil::slurp(tmp.path() / "channel.json"));
  CHECK(channel.kind == MapKind::channel);
  SuperOpMatrix g = testutil::generator_of(dephasing(0.9));
  RealMatrix want = expm(RealMatrix(g.mat * 0.5));
  CHECK((channel.mat - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("experiment gad-sweep: outputs, determinism, resumability") {
  testutil::TempDir tmp;
  const fs::path dir_a = tmp.path() / "a";
  const fs::path dir_b = tmp.path() / "b";
  const std::string common =
      " --family gad-sweep --samples 3 --seed 999 --optimizer-cap 1 "
      "--slices 12 --max-iters 10 --restarts 1";
  std::string out, err;

  REQUIRE(testutil::run_cli("experiment --out " + dir_a.string() + common,
                            tmp.path(), &out, &err) == 0);
  REQUIRE(testutil::run_cli("experiment --out " + dir_b.string() + common,
                            tmp.path(), &out, &err) == 0);

  const std::vector<std::string> names = {
      "samples_gad_p0.500.csv", "samples_gad_p0.625.csv",
      "samples_gad_p0.750.csv", "samples_gad_p0.875.csv",
      "samples_gad_p1.000.csv", "summary_gad.csv"};
  for (const std::string& name : names) {
    CAPTURE(name);
    REQUIRE(fs::exists(dir_a / name));
    CHECK(testutil::slurp(dir_a / name) == testutil::slurp(dir_b / name));
  }

  // Per-sample file: header plus one row per sample.
  {
    std::istringstream in(testutil::slurp(dir_a / "samples_gad_p0.500.csv"));
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
      if (!line.empty()) ++lines;
    }
    CHECK(lines == 4);
  }
  {
    std::istringstream in(testutil::slurp(dir_a / "summary_gad.csv"));
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
      if (!line.empty()) ++lines;
    }
    CHECK(lines == 6);
  }

  // Truncate one per-sample file to its first row; a rerun must repair it
  // to the untruncated content without duplicating rows.
  {
    std::istringstream in(testutil::slurp(dir_a / "samples_gad_p0.500.csv"));
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    std::ofstream outfile(dir_a / "samples_gad_p0.500.csv",
                          std::ios::trunc);
    outfile << header << "\n" << first << "\n";
  }
  REQUIRE(testutil::run_cli("experiment --out " + dir_a.string() + common,
                            tmp.path(), &out, &err) == 0);
  CHECK(testutil::slurp(dir_a / "samples_gad_p0.500.csv") ==
        testutil::slurp(dir_b / "samples_gad_p0.500.csv"));
}

TEST_CASE("experiment lambda-skew: boundary and ladder files") {
  testutil::TempDir tmp;
  std::string out, err;
  const int rc = testutil::run_cli(
      "experiment --family lambda-skew --out " + tmp.path().string() +
          " --seed 7 --slices 16 --max-iters 5 --restarts 1",
      tmp.path(), &out, &err);
  REQUIRE(rc == 0);

  std::istringstream boundary(testutil::slurp(tmp.path() /
                                              "lambda_boundary.csv"));
  std::string header, row;
  REQUIRE(std::getline(boundary, header));
  REQUIRE(std::getline(boundary, row));
  CHECK(header == "drift_skew,boundary_skew");
  const auto comma = row.find(',');
  REQUIRE(comma != std::string::npos);
  const double skew_boundary = std::stod(row.substr(comma + 1));
  CHECK(skew_boundary >= 9.0);
  CHECK(skew_boundary <= 12.0);

  std::istringstream ladder(testutil::slurp(tmp.path() / "lambda_skew.csv"));
  int lines = 0;
  std::string line;
  while (std::getline(ladder, line)) {
    if (!line.empty()) ++lines;
  }
  CHECK(lines == 21);
}

TEST_SUITE_END();

#endif  // REACHCERT_CLI_PATH
