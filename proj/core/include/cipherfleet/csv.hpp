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
// CSV export/import. Trajectory schema (header mandatory, LF endings):
//   t, agent{i}_x, agent{i}_y, dist_e{k}, mu_hat_e{k}, mu_hat_plain_e{k},
//   enc_time_us, eval_time_us
// with 1-based agent/edge indices. Plaintext-mode logs omit the encrypted
// columns (mu_hat_e, timings); encrypted-only logs omit mu_hat_plain_e.
// Reals carry 12 significant digits, integers are exact.
#ifndef CIPHERFLEET_CSV_HPP_
#define CIPHERFLEET_CSV_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "cipherfleet/sim.hpp"

namespace cipherfleet {

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out);
void write_trajectory_csv(const TrajectoryLog& log, const std::string& path);

// One row per key length: N,p5_us,p25_us,p50_us,p75_us,p95_us.
void write_timing_csv(const MonteCarloResult& result, std::ostream& out);
void write_timing_csv(const MonteCarloResult& result, const std::string& path);

// Per-step stats for one key length: t,mean_dist,ci_lo,ci_hi.
void write_ci_csv(const MonteCarloPerN& per, std::ostream& out);
void write_ci_csv(const MonteCarloPerN& per, const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
  std::vector<double> column_values(const std::string& name) const;
};

// Strict numeric reader; throws IoError naming the offending column/row.
CsvTable read_csv(std::istream& in, const std::string& origin = "<stream>");
CsvTable read_csv_file(const std::string& path);

std::string format_real(double v);  // 12 significant digits

}  // namespace cipherfleet

#endif  // CIPHERFLEET_CSV_HPP_
