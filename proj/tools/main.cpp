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
//
// cipherfleet CLI: key generation, closed-loop scenario runs,
// encrypted-vs-plain comparison, key-length sweeps, and SVG plot export.
// Exit codes: 0 success, 2 usage/validation, 3 I/O or format errors.
#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cipherfleet/csv.hpp"
#include "cipherfleet/scenario.hpp"
#include "cipherfleet/serialize.hpp"
#include "cipherfleet/sim.hpp"
#include "svg_plot.hpp"

namespace fs = std::filesystem;
using namespace cipherfleet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct SeedFlag {
  std::uint64_t value = 0;
  bool given = false;
};

int cmd_keygen(const std::string& params_path, const std::string& out_path,
               SeedFlag seed) {
  const CipherParams params = load_params(params_path);
  if (!seed.given) {
    seed.value = fresh_seed();
    std::printf("seed (generated): %" PRIu64 "\n", seed.value);
  }
  Rng rng(seed.value);
  const SecretKey key = keygen(params, rng);
  save_key(params, key, out_path);
  std::printf("wrote %s: N = %d, q = 10^%d (d = %d digits), p = 10^%d\n",
              out_path.c_str(), params.key_length(), params.digits(),
              params.digits(), params.p_exp());
  return kExitOk;
}

void print_run_summary(const Scenario& sc, const TrajectoryLog& log) {
  const StepRecord& last = log.steps.back();
  std::printf("%s: %lld steps, mode %s\n", sc.name.c_str(),
              static_cast<long long>(log.steps.size()),
              sc.mode == RunMode::kEncrypted
                  ? "encrypted"
                  : (sc.mode == RunMode::kPlaintext ? "plaintext" : "both"));
  for (int k = 0; k < log.edge_count; ++k) {
    std::printf("  edge %d: final distance %.6f (d* = %.3f)", k + 1,
                last.dist(k), sc.d_star(k));
    if (sc.mode != RunMode::kPlaintext) {
      std::printf(", mu_hat_enc = %.6f", last.mu_hat_enc(k));
    }
    if (sc.mode != RunMode::kEncrypted) {
      std::printf(", mu_hat_plain = %.6f", last.mu_hat_plain(k));
    }
    std::printf("\n");
  }
}

int cmd_run(const std::string& scenario_path, const std::string& mode,
            const std::string& out_path, SeedFlag seed, bool measure_timing) {
  Scenario sc = load_scenario(scenario_path);
  if (mode == "encrypted") {
    sc.mode = RunMode::kEncrypted;
  } else if (mode == "plaintext") {
    sc.mode = RunMode::kPlaintext;
  } else if (mode == "both") {
    sc.mode = RunMode::kBoth;
  } else if (!mode.empty()) {
    throw CLI::ValidationError("--mode must be encrypted|plaintext|both");
  }
  if (seed.given) {
    sc.seed = seed.value;
  }
  std::printf("seed: %" PRIu64 "\n", sc.seed);

  RunOptions options;
  options.measure_timing = measure_timing;
  const TrajectoryLog log = run_closed_loop(sc, options);
  if (!out_path.empty()) {
    write_trajectory_csv(log, out_path);
    std::printf("trajectory written to %s\n", out_path.c_str());
  }
  print_run_summary(sc, log);
  return kExitOk;
}

int cmd_compare(const std::string& scenario_path, const std::string& out_path,
                SeedFlag seed) {
  Scenario sc = load_scenario(scenario_path);
  sc.mode = RunMode::kBoth;
  if (seed.given) sc.seed = seed.value;
  std::printf("seed: %" PRIu64 "\n", sc.seed);
  const TrajectoryLog log = run_closed_loop(sc);
  if (!out_path.empty()) {
    write_trajectory_csv(log, out_path);
  }
  print_run_summary(sc, log);
  for (int k = 0; k < log.edge_count; ++k) {
    double sup_plain = 0, sup_oracle = 0;
    for (const StepRecord& r : log.steps) {
      sup_plain = std::max(sup_plain,
                           std::fabs(r.mu_hat_enc(k) - r.mu_hat_plain(k)));
      sup_oracle = std::max(sup_oracle,
                            std::fabs(r.mu_hat_enc(k) - r.mu_hat_oracle(k)));
    }
    std::printf(
        "  edge %d: sup|mu_hat_enc - mu_hat_plain| = %.3e, "
        "sup|mu_hat_enc - oracle| = %.3e\n",
        k + 1, sup_plain, sup_oracle);
  }
  return kExitOk;
}

int cmd_sweep(const std::string& scenario_path,
              std::vector<int> key_lengths, int runs,
              const std::string& out_dir, SeedFlag seed) {
  if (runs < 1) {
    throw CLI::ValidationError("--runs must be >= 1");
  }
  if (key_lengths.empty()) {
    key_lengths = {10, 20, 30, 35};
  }
  Scenario sc = load_scenario(scenario_path);
  if (seed.given) sc.seed = seed.value;
  std::printf("seed: %" PRIu64 "\n", sc.seed);

  fs::create_directories(out_dir);
  const MonteCarloResult mc = run_monte_carlo(sc, runs, key_lengths);
  for (const MonteCarloPerN& per : mc.per_n) {
    const std::string ci_path =
        (fs::path(out_dir) / ("ci_N" + std::to_string(per.key_length) +
                              ".csv"))
            .string();
    write_ci_csv(per, ci_path);
    std::printf("N = %2d: median enc %.1f us, delay %d steps -> %s\n",
                per.key_length, per.enc_us.p50, per.control_delay_steps,
                ci_path.c_str());
  }
  const std::string timing_path =
      (fs::path(out_dir) / "timing_quantiles.csv").string();
  write_timing_csv(mc, timing_path);
  std::printf("timing quantiles written to %s\n", timing_path.c_str());
  return kExitOk;
}

std::vector<int> trajectory_edges(const CsvTable& table,
                                  const std::string& prefix) {
  std::vector<int> out;
  for (int k = 1;; ++k) {
    if (table.column(prefix + std::to_string(k)) < 0) break;
    out.push_back(k);
  }
  return out;
}

void plot_trajectory(const CsvTable& table, const std::string& origin,
                     const fs::path& out_dir) {
  if (table.rows.empty()) {
    throw IoError(origin + ": empty input (no data rows)");
  }
  const std::vector<double> t = table.column_values("t");
  const std::vector<int> enc_edges = trajectory_edges(table, "mu_hat_e");
  const std::vector<int> plain_edges =
      trajectory_edges(table, "mu_hat_plain_e");
  if (enc_edges.empty() && plain_edges.empty()) {
    throw IoError(origin + ": no mu_hat_e{k} or mu_hat_plain_e{k} columns");
  }
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                           "#9467bd", "#ff7f0e", "#8c564b"};
  std::vector<svg::Series> series;
  for (std::size_t i = 0; i < enc_edges.size(); ++i) {
    svg::Series s;
    s.label = "mu_hat_enc e" + std::to_string(enc_edges[i]);
    s.color = palette[i % 6];
    s.x = t;
    s.y = table.column_values("mu_hat_e" + std::to_string(enc_edges[i]));
    series.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < plain_edges.size(); ++i) {
    svg::Series s;
    s.label = "mu_hat e" + std::to_string(plain_edges[i]);
    s.color = palette[i % 6];
    s.dashed = true;
    s.x = t;
    s.y = table.column_values("mu_hat_plain_e" +
                              std::to_string(plain_edges[i]));
    series.push_back(std::move(s));
  }
  svg::ChartOptions opt;
  opt.title = "Mismatch estimate settling";
  opt.x_label = "step";
  opt.y_label = "mu_hat";
  svg::write_line_chart((out_dir / "mu_hat_settling.svg").string(), opt,
                        series);
  std::printf("wrote %s\n", (out_dir / "mu_hat_settling.svg").c_str());

  // Distances over time from the same trace.
  const std::vector<int> dist_edges = trajectory_edges(table, "dist_e");
  if (!dist_edges.empty()) {
    std::vector<svg::Series> dist_series;
    for (std::size_t i = 0; i < dist_edges.size(); ++i) {
      svg::Series s;
      s.label = "dist e" + std::to_string(dist_edges[i]);
      s.color = palette[i % 6];
      s.x = t;
      s.y = table.column_values("dist_e" + std::to_string(dist_edges[i]));
      dist_series.push_back(std::move(s));
    }
    svg::ChartOptions dopt;
    dopt.title = "Inter-agent distances";
    dopt.x_label = "step";
    dopt.y_label = "distance";
    svg::write_line_chart((out_dir / "distances.svg").string(), dopt,
                          dist_series);
    std::printf("wrote %s\n", (out_dir / "distances.svg").c_str());
  }
}

void plot_ci_file(const fs::path& csv_path, const fs::path& out_dir) {
  const CsvTable table = read_csv_file(csv_path.string());
  if (table.rows.empty()) {
    throw IoError(csv_path.string() + ": empty input (no data rows)");
  }
  svg::Band band;
  band.x = table.column_values("t");
  band.lo = table.column_values("ci_lo");
  band.hi = table.column_values("ci_hi");
  svg::Series mean;
  mean.label = "mean distance";
  mean.x = band.x;
  mean.y = table.column_values("mean_dist");
  svg::ChartOptions opt;
  const std::string stem = csv_path.stem().string();  // ci_N10
  opt.title = "Distance convergence, " + stem.substr(3) + " (95% CI)";
  opt.x_label = "step";
  opt.y_label = "distance";
  const fs::path out = out_dir / (stem + ".svg");
  svg::write_line_chart(out.string(), opt, {mean}, {band});
  std::printf("wrote %s\n", out.c_str());
}

void plot_timing_file(const fs::path& csv_path, const fs::path& out_dir) {
  const CsvTable table = read_csv_file(csv_path.string());
  if (table.rows.empty()) {
    throw IoError(csv_path.string() + ": empty input (no data rows)");
  }
  std::vector<svg::BoxStat> boxes;
  const int n_col = table.column("N");
  if (n_col < 0) {
    throw IoError(csv_path.string() + ": missing column 'N'");
  }
  for (const auto& row : table.rows) {
    svg::BoxStat b;
    b.label = "N=" + std::to_string(static_cast<int>(row[0]));
    b.p5 = row[table.column("p5_us")];
    b.p25 = row[table.column("p25_us")];
    b.p50 = row[table.column("p50_us")];
    b.p75 = row[table.column("p75_us")];
    b.p95 = row[table.column("p95_us")];
    boxes.push_back(std::move(b));
  }
  svg::ChartOptions opt;
  opt.title = "Per-step encryption time by key length";
  opt.x_label = "key length";
  opt.y_label = "microseconds";
  const fs::path out = out_dir / "enc_time_per_N.svg";
  svg::write_box_chart(out.string(), opt, boxes);
  std::printf("wrote %s\n", out.c_str());
}

int cmd_export_plots(const std::string& in_path, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const fs::path in(in_path);
  if (!fs::exists(in)) {
    throw IoError("input path does not exist: " + in_path);
  }
  if (fs::is_directory(in)) {
    bool found = false;
    for (const auto& entry : fs::directory_iterator(in)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("ci_N", 0) == 0 && entry.path().extension() == ".csv") {
        plot_ci_file(entry.path(), out_dir);
        found = true;
      } else if (name == "timing_quantiles.csv") {
        plot_timing_file(entry.path(), out_dir);
        found = true;
      }
    }
    if (!found) {
      throw IoError("no ci_N*.csv or timing_quantiles.csv found in " +
                    in_path);
    }
  } else {
    plot_trajectory(read_csv_file(in_path), in_path, out_dir);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cipherfleet: encrypted distributed formation control"};
  app.require_subcommand(1);

  // keygen
  auto* keygen_cmd =
      app.add_subcommand("keygen", "Generate a secret key file");
  std::string kg_params, kg_out;
  SeedFlag kg_seed;
  keygen_cmd->add_option("--params", kg_params, "cipher params JSON file")
      ->required();
  keygen_cmd->add_option("--out", kg_out, "output key file")->required();
  keygen_cmd->add_option("--seed", kg_seed.value, "RNG seed")
      ->each([&](const std::string&) { kg_seed.given = true; });

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a closed-loop scenario");
  std::string run_scenario, run_mode, run_out;
  SeedFlag run_seed;
  bool run_timing = false;
  run_cmd->add_option("--scenario", run_scenario, "scenario file")->required();
  run_cmd->add_option("--mode", run_mode, "encrypted|plaintext|both");
  run_cmd->add_option("--out", run_out, "trajectory CSV path");
  run_cmd->add_option("--seed", run_seed.value, "override scenario seed")
      ->each([&](const std::string&) { run_seed.given = true; });
  run_cmd->add_flag("--measure-timing", run_timing,
                    "record wall-clock enc/eval times (makes the CSV "
                    "non-reproducible byte for byte)");

  // compare
  auto* compare_cmd = app.add_subcommand(
      "compare", "Run encrypted and plaintext pipelines side by side");
  std::string cmp_scenario, cmp_out;
  SeedFlag cmp_seed;
  compare_cmd->add_option("--scenario", cmp_scenario, "scenario file")
      ->required();
  compare_cmd->add_option("--out", cmp_out, "trajectory CSV path");
  compare_cmd->add_option("--seed", cmp_seed.value, "override scenario seed")
      ->each([&](const std::string&) { cmp_seed.given = true; });

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Monte Carlo sweep over key lengths");
  std::string sw_scenario, sw_out;
  std::vector<int> sw_lengths;
  int sw_runs = 50;
  SeedFlag sw_seed;
  sweep_cmd->add_option("--scenario", sw_scenario, "scenario file")
      ->required();
  sweep_cmd->add_option("--key-lengths", sw_lengths,
                        "key lengths N (default 10,20,30,35)")
      ->delimiter(',');
  sweep_cmd->add_option("--runs", sw_runs, "replicates per key length");
  sweep_cmd->add_option("--out", sw_out, "output directory")->required();
  sweep_cmd->add_option("--seed", sw_seed.value, "override scenario seed")
      ->each([&](const std::string&) { sw_seed.given = true; });

  // export-plots
  auto* plots_cmd =
      app.add_subcommand("export-plots", "Render SVG plots from CSV outputs");
  std::string pl_in, pl_out;
  plots_cmd->add_option("--in", pl_in, "trajectory CSV or sweep directory")
      ->required();
  plots_cmd->add_option("--out", pl_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (*keygen_cmd) return cmd_keygen(kg_params, kg_out, kg_seed);
    if (*run_cmd) {
      return cmd_run(run_scenario, run_mode, run_out, run_seed, run_timing);
    }
    if (*compare_cmd) return cmd_compare(cmp_scenario, cmp_out, cmp_seed);
    if (*sweep_cmd) {
      return cmd_sweep(sw_scenario, sw_lengths, sw_runs, sw_out, sw_seed);
    }
    if (*plots_cmd) return cmd_export_plots(pl_in, pl_out);
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kExitIo;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    // Domain validation failures (plaintext-space gate, error budget,
    // malformed graphs, coefficient checks) surface here.
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
