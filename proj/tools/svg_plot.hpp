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
// Small static-SVG chart writer for the export-plots command: line charts,
// mean-with-band charts, and per-category box glyphs. CSVs remain the ground
// truth; these renderings are presentation only.
#ifndef CIPHERFLEET_TOOLS_SVG_PLOT_HPP_
#define CIPHERFLEET_TOOLS_SVG_PLOT_HPP_

#include <string>
#include <vector>

namespace cipherfleet::svg {

struct Series {
  std::string label;
  std::string color = "#1f77b4";
  bool dashed = false;
  std::vector<double> x, y;
};

struct Band {
  std::string color = "#1f77b4";
  std::vector<double> x, lo, hi;
};

struct BoxStat {
  std::string label;  // category (e.g. key length)
  double p5, p25, p50, p75, p95;
};

struct ChartOptions {
  std::string title;
  std::string x_label, y_label;
  int width = 860;
  int height = 520;
};

void write_line_chart(const std::string& path, const ChartOptions& options,
                      const std::vector<Series>& series,
                      const std::vector<Band>& bands = {});

void write_box_chart(const std::string& path, const ChartOptions& options,
                     const std::vector<BoxStat>& boxes);

}  // namespace cipherfleet::svg

#endif  // CIPHERFLEET_TOOLS_SVG_PLOT_HPP_
