// Copyright 2026 qmstransport Authors
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

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmt/commands.hpp"
#include "test_util.hpp"

using namespace qmt;
using namespace qmt::cli;
namespace fs = std::filesystem;

namespace {

const std::string kData = QMT_TEST_DATA;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("qmt_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
  pclose(f);
  return out;
}

int run_cmd(const std::string& command, const std::string& scenario, const fs::path& out,
            int threads = 1) {
  RunOptions o;
  o.command = command;
  o.scenario_path = kData + "/" + scenario;
  o.out_dir = out.string();
  o.threads = threads;
  return run(o);
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("normalized scenarios round trip") {
  const std::string bin = QMT_BINARY;
  const std::string first =
      capture(bin + " validate --scenario " + kData + "/depolarizing.json --dump-normalized");
  REQUIRE_FALSE(first.empty());
  fs::path dir = scratch("roundtrip");
  fs::create_directories(dir);
  std::ofstream(dir / "n.json") << first;
  const std::string second =
      capture(bin + " validate --scenario " + (dir / "n.json").string() + " --dump-normalized");
  CHECK(first == second);
  json j = json::parse(first);
  CHECK(j["seed"] == 7);
  CHECK(j["tasks"].size() == 6);
}

TEST_CASE("seed override reaches the normalized scenario") {
  const std::string out = capture(std::string(QMT_BINARY) + " validate --scenario " + kData +
                                  "/depolarizing.json --seed 123 --dump-normalized");
  CHECK(json::parse(out)["seed"] == 123);
}

TEST_CASE("outputs are deterministic across runs and thread counts") {
  for (const char* cmd : {"distance", "ricci", "inequalities", "evolve", "geodesic"}) {
    CAPTURE(cmd);
    fs::path a = scratch(std::string("det_a_") + cmd), b = scratch(std::string("det_b_") + cmd);
    REQUIRE(run_cmd(cmd, "depolarizing.json", a, 1) == 0);
    REQUIRE(run_cmd(cmd, "depolarizing.json", b, 2) == 0);
    int files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
      if (e.path().filename() == "metadata.json") continue;
      ++files;
      CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    }
    CHECK(files >= 1);
  }
}

TEST_CASE("two point distance output matches the oracle") {
  fs::path out = scratch("two_point");
  REQUIRE(run_cmd("distance", "two_point.json", out) == 0);
  auto rows = read_csv(out / "distance.csv");
  REQUIRE(rows.size() == 3);
  // endpoint, d0, d1, d2, residual
  const double oracle = 1.1835808027743662;
  CHECK(std::abs(rows[0][2] - oracle) < 1e-5);
  CHECK(std::abs(rows[0][2] - oracle) <= rows[0][4]);
  CHECK(rows[0][2] == rows[1][1]);
  CHECK(rows[2][3] == 0.0);
}

TEST_CASE("evolve decays the entropy at least at the depolarizing rate") {
  fs::path out = scratch("evolve");
  REQUIRE(run_cmd("evolve", "depolarizing.json", out) == 0);
  auto rows = read_csv(out / "evolve.csv");
  REQUIRE(rows.size() == 31);
  // Least-squares slope of log Ent
  double st = 0, sl = 0, stt = 0, stl = 0;
  int n = 0;
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][1] <= rows[i - 1][1]);
    CHECK(std::abs(rows[i][3]) < 1e-10);
    const double t = rows[i][0], l = std::log(rows[i][1]);
    st += t, sl += l, stt += t * t, stl += t * l, ++n;
  }
  const double slope = (n * stl - st * sl) / (n * stt - st * st);
  CHECK(-slope / 2.0 >= 1.0 - 1e-6);
}

TEST_CASE("exit codes") {
  CHECK(run_cmd("validate", "explicit_qubit.json", scratch("ok")) == kOk);
  CHECK(run_cmd("validate", "explicit_bad_omega.json", scratch("bad")) == kValidation);
  CHECK(run_cmd("validate", "missing_jstar.json", scratch("miss")) == kSchema);
  fs::path fermion = scratch("fermion");
  CHECK(run_cmd("ricci", "fermion.json", fermion) == kOk);
  json r = json::parse(slurp(fermion / "ricci.json"));
  CHECK(r.dump().find("intertwining") != std::string::npos);

  fs::path dir = scratch("schema");
  fs::create_directories(dir);
  std::ofstream(dir / "s.json") << R"({"structure": {"builder": "depolarizing", "params": {"gamma": 1.0, "n": 2}},
    "tasks": [{"cmd": "evolve", "bogus": 1}]})";
  RunOptions o;
  o.command = "evolve";
  o.scenario_path = (dir / "s.json").string();
  o.out_dir = (dir / "out").string();
  CHECK(run(o) == kSchema);

  std::ofstream(dir / "bad_state.json") << R"({"structure": {"builder": "depolarizing", "params": {"gamma": 1.0, "n": 2}},
    "tasks": [{"cmd": "evolve", "rho0": [[3.0, 0.0], [0.0, -1.0]]}]})";
  o.scenario_path = (dir / "bad_state.json").string();
  CHECK(run(o) == kSchema);
}

TEST_CASE("format_real is round trip exact") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) CHECK(std::stod(format_real(x)) == x);
}
