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
#include "cipherfleet/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cipherfleet/errors.hpp"

namespace cipherfleet {

std::string format_real(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out) {
  const bool enc_cols = log.mode != RunMode::kPlaintext;
  const bool plain_cols = log.mode != RunMode::kEncrypted;

  out << "t";
  for (int i = 1; i <= log.n; ++i) {
    out << ",agent" << i << "_x,agent" << i << "_y";
  }
  for (int k = 1; k <= log.edge_count; ++k) out << ",dist_e" << k;
  if (enc_cols) {
    for (int k = 1; k <= log.edge_count; ++k) out << ",mu_hat_e" << k;
  }
  if (plain_cols) {
    for (int k = 1; k <= log.edge_count; ++k) out << ",mu_hat_plain_e" << k;
  }
  if (enc_cols) {
    out << ",enc_time_us,eval_time_us";
  }
  out << "\n";

  for (const StepRecord& r : log.steps) {
    out << r.t;
    for (int i = 0; i < log.n; ++i) {
      out << ',' << format_real(r.positions(2 * i)) << ','
          << format_real(r.positions(2 * i + 1));
    }
    for (int k = 0; k < log.edge_count; ++k) {
      out << ',' << format_real(r.dist(k));
    }
    if (enc_cols) {
      for (int k = 0; k < log.edge_count; ++k) {
        out << ',' << format_real(r.mu_hat_enc(k));
      }
    }
    if (plain_cols) {
      for (int k = 0; k < log.edge_count; ++k) {
        out << ',' << format_real(r.mu_hat_plain(k));
      }
    }
    if (enc_cols) {
      out << ',' << format_real(r.enc_time_us) << ','
          << format_real(r.eval_time_us);
    }
    out << "\n";
  }
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF endings everywhere
  if (!out) {
    throw IoError("cannot write " + path);
  }
  return out;
}

}  // namespace

void write_trajectory_csv(const TrajectoryLog& log, const std::string& path) {
  auto out = open_out(path);
  write_trajectory_csv(log, out);
}

void write_timing_csv(const MonteCarloResult& result, std::ostream& out) {
  out << "N,p5_us,p25_us,p50_us,p75_us,p95_us\n";
  for (const MonteCarloPerN& per : result.per_n) {
    out << per.key_length << ',' << format_real(per.enc_us.p5) << ','
        << format_real(per.enc_us.p25) << ',' << format_real(per.enc_us.p50)
        << ',' << format_real(per.enc_us.p75) << ','
        << format_real(per.enc_us.p95) << "\n";
  }
}

void write_timing_csv(const MonteCarloResult& result,
                      const std::string& path) {
  auto out = open_out(path);
  write_timing_csv(result, out);
}

void write_ci_csv(const MonteCarloPerN& per, std::ostream& out) {
  out << "t,mean_dist,ci_lo,ci_hi\n";
  for (std::size_t t = 0; t < per.mean_dist.size(); ++t) {
    out << t << ',' << format_real(per.mean_dist[t]) << ','
        << format_real(per.ci_lo[t]) << ',' << format_real(per.ci_hi[t])
        << "\n";
  }
}

void write_ci_csv(const MonteCarloPerN& per, const std::string& path) {
  auto out = open_out(path);
  write_ci_csv(per, out);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<double> CsvTable::column_values(const std::string& name) const {
  const int c = column(name);
  if (c < 0) {
    throw IoError("CSV is missing column '" + name + "'");
  }
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    out.push_back(row[static_cast<std::size_t>(c)]);
  }
  return out;
}

CsvTable read_csv(std::istream& in, const std::string& origin) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw IoError(origin + ": empty input, no header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) {
    table.header.push_back(cell);
  }
  if (table.header.empty()) {
    throw IoError(origin + ": header row has no columns");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(table.header.size());
    std::stringstream ls(line);
    std::size_t col = 0;
    while (std::getline(ls, cell, ',')) {
      if (col >= table.header.size()) break;
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        throw IoError(origin + ": line " + std::to_string(lineno) +
                      ", column '" + table.header[col] +
                      "' is not numeric: '" + cell + "'");
      }
      ++col;
    }
    if (row.size() != table.header.size()) {
      throw IoError(origin + ": line " + std::to_string(lineno) + " has " +
                    std::to_string(row.size()) + " cells, expected " +
                    std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  return read_csv(in, path);
}

}  // namespace cipherfleet
