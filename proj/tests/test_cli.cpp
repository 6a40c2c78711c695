/*
 * Copyright 2026 The Cipherfleet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cipherfleet/csv.hpp"
#include "cipherfleet/scenario.hpp"

namespace fs = std::filesystem;
using namespace cipherfleet;

namespace {

const char* cli_path() { return CF_CLI_PATH; }
const char* scenario_dir() { return CF_SCENARIO_DIR; }

struct CommandResult {
  int exit_code;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const fs::path out_file =
      fs::temp_directory_path() / ("cf_cli_out_" + std::to_string(rand()));
  const std::string cmd = std::string(cli_path()) + " " + args + " > " +
                          out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(out_file);
  return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "cipherfleet_cli_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_params(const fs::path& dir) {
  const fs::path p = dir / "params.json";
  std::ofstream out(p);
  out << R"({"p_exp": 10, "L_exp": 6, "N": 10, "err_bound": 100})";
  return p;
}

// A cut-down copy of the bundled triangle for fast CLI runs.
fs::path write_short_scenario(const fs::path& dir, int horizon,
                              const std::string& name) {
  Scenario sc =
      load_scenario(std::string(scenario_dir()) + "/triangle.scenario");
  sc.horizon = horizon;
  const fs::path p = dir / name;
  save_scenario(sc, p.string());
  return p;
}

}  // namespace

TEST_CASE("keygen writes byte-identical keys for a fixed seed") {
  const fs::path dir = scratch_dir();
  const fs::path params = write_params(dir);
  const fs::path k1 = dir / "k1.json", k2 = dir / "k2.json";
  const CommandResult r1 = run_cli("keygen --params " + params.string() +
                                   " --out " + k1.string() + " --seed 9");
  const CommandResult r2 = run_cli("keygen --params " + params.string() +
                                   " --out " + k2.string() + " --seed 9");
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(k1) == slurp(k2));
  CHECK(r1.output.find("N = 10") != std::string::npos);

  // key vector length matches N
  const auto j = nlohmann::json::parse(slurp(k1));
  CHECK(j.at("sk").size() == 10);
}

TEST_CASE("keygen without --seed generates and prints one") {
  const fs::path dir = scratch_dir();
  const fs::path params = write_params(dir);
  const CommandResult r = run_cli("keygen --params " + params.string() +
                                  " --out " + (dir / "k3.json").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("seed (generated):") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  const fs::path dir = scratch_dir();
  const fs::path params = write_params(dir);
  CHECK(run_cli("keygen --params " + params.string()).exit_code == 2);
  CHECK(run_cli("definitely-not-a-command").exit_code == 2);
  CHECK(run_cli("run --scenario x.scenario --frobnicate").exit_code == 2);
  CHECK(run_cli("sweep --scenario x --runs 0 --out y").exit_code == 2);
}

TEST_CASE("missing files exit 3") {
  CHECK(run_cli("keygen --params /nonexistent.json --out /tmp/k.json")
            .exit_code == 3);
  CHECK(run_cli("run --scenario /nonexistent.scenario").exit_code == 3);
  CHECK(run_cli("export-plots --in /nonexistent --out /tmp/p").exit_code ==
        3);
}

TEST_CASE("scenario that violates the plaintext-space gate exits 2") {
  const fs::path dir = scratch_dir();
  Scenario sc =
      load_scenario(std::string(scenario_dir()) + "/triangle.scenario");
  sc.p_exp = 2;
  sc.L_exp = 22;
  const fs::path bad = dir / "bad.scenario";
  save_scenario(sc, bad.string());
  const CommandResult r = run_cli("run --scenario " + bad.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("plaintext-space bound") != std::string::npos);
}

TEST_CASE("cmd_run is byte-deterministic for a fixed seed") {
  const fs::path dir = scratch_dir();
  const fs::path sc = write_short_scenario(dir, 300, "short.scenario");
  const fs::path c1 = dir / "run1.csv", c2 = dir / "run2.csv";
  CHECK(run_cli("run --scenario " + sc.string() + " --out " + c1.string() +
                " --seed 77")
            .exit_code == 0);
  CHECK(run_cli("run --scenario " + sc.string() + " --out " + c2.string() +
                " --seed 77")
            .exit_code == 0);
  const std::string a = slurp(c1), b = slurp(c2);
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a.find("\r") == std::string::npos);  // LF endings
}

TEST_CASE("trajectory CSV re-parses losslessly at stored precision") {
  const fs::path dir = scratch_dir();
  const fs::path sc = write_short_scenario(dir, 120, "roundtrip.scenario");
  const fs::path csv = dir / "rt.csv";
  REQUIRE(run_cli("run --scenario " + sc.string() + " --out " + csv.string())
              .exit_code == 0);
  const CsvTable table = read_csv_file(csv.string());
  REQUIRE(!table.rows.empty());

  // Re-emitting every parsed cell at the writer's precision reproduces the
  // file byte for byte.
  std::ostringstream rebuilt;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    rebuilt << (i ? "," : "") << table.header[i];
  }
  rebuilt << "\n";
  for (const auto& row : table.rows) {
    rebuilt << static_cast<long long>(row[0]);
    for (std::size_t i = 1; i < row.size(); ++i) {
      rebuilt << ',' << format_real(row[i]);
    }
    rebuilt << "\n";
  }
  CHECK(rebuilt.str() == slurp(csv));
}

TEST_CASE("compare prints deviation summaries") {
  const fs::path dir = scratch_dir();
  const fs::path sc = write_short_scenario(dir, 150, "cmp.scenario");
  const CommandResult r = run_cli("compare --scenario " + sc.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("sup|mu_hat_enc - oracle| = 0.000e+00") !=
        std::string::npos);
}

TEST_CASE("export-plots renders SVGs from a trajectory") {
  const fs::path dir = scratch_dir();
  const fs::path sc = write_short_scenario(dir, 100, "plot.scenario");
  const fs::path csv = dir / "plot.csv";
  const fs::path plots = dir / "plots";
  REQUIRE(run_cli("run --scenario " + sc.string() + " --out " + csv.string())
              .exit_code == 0);
  CHECK(run_cli("export-plots --in " + csv.string() + " --out " +
                plots.string())
            .exit_code == 0);
  CHECK(fs::exists(plots / "mu_hat_settling.svg"));
  const std::string svg = slurp(plots / "mu_hat_settling.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("mu_hat_enc e1") != std::string::npos);
  CHECK(svg.find("mu_hat e1") != std::string::npos);  // overlaid plain curve
}

TEST_CASE("export-plots rejects malformed CSV naming the column") {
  const fs::path dir = scratch_dir();
  const fs::path bad = dir / "bad.csv";
  {
    std::ofstream out(bad);
    out << "t,mu_hat_e1\n0,not_a_number\n";
  }
  const CommandResult r =
      run_cli("export-plots --in " + bad.string() + " --out " +
              (dir / "p2").string());
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("mu_hat_e1") != std::string::npos);
}
