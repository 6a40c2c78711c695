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
#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "cipherfleet/errors.hpp"

namespace cipherfleet::svg {

namespace {

constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = 0;
      hi = 1;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Round tick spacing to 1/2/5 * 10^k.
std::vector<double> ticks(const Range& r, int target = 6) {
  const double span = r.hi - r.lo;
  double step = std::pow(10.0, std::floor(std::log10(span / target)));
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (span / (step * mult) <= target) {
      step *= mult;
      break;
    }
  }
  std::vector<double> out;
  double v = std::ceil(r.lo / step) * step;
  for (; v <= r.hi + 1e-12 * span; v += step) out.push_back(v);
  return out;
}

class Canvas {
 public:
  Canvas(const ChartOptions& opt, Range xr, Range yr)
      : opt_(opt), xr_(xr), yr_(yr) {
    svg_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width
         << "\" height=\"" << opt.height << "\" viewBox=\"0 0 " << opt.width
         << " " << opt.height << "\">\n";
    svg_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  double sx(double x) const {
    return kMarginLeft + (x - xr_.lo) / (xr_.hi - xr_.lo) *
                             (opt_.width - kMarginLeft - kMarginRight);
  }
  double sy(double y) const {
    return opt_.height - kMarginBottom -
           (y - yr_.lo) / (yr_.hi - yr_.lo) *
               (opt_.height - kMarginTop - kMarginBottom);
  }

  void axes() {
    const int x0 = kMarginLeft, x1 = opt_.width - kMarginRight;
    const int y0 = opt_.height - kMarginBottom, y1 = kMarginTop;
    for (double t : ticks(xr_)) {
      const double x = sx(t);
      svg_ << "<line x1=\"" << x << "\" y1=\"" << y0 << "\" x2=\"" << x
           << "\" y2=\"" << y1 << "\" stroke=\"#e0e0e0\"/>\n";
      svg_ << "<text x=\"" << x << "\" y=\"" << y0 + 18
           << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(t)
           << "</text>\n";
    }
    for (double t : ticks(yr_)) {
      const double y = sy(t);
      svg_ << "<line x1=\"" << x0 << "\" y1=\"" << y << "\" x2=\"" << x1
           << "\" y2=\"" << y << "\" stroke=\"#e0e0e0\"/>\n";
      svg_ << "<text x=\"" << x0 - 6 << "\" y=\"" << y + 4
           << "\" font-size=\"12\" text-anchor=\"end\">" << fmt(t)
           << "</text>\n";
    }
    svg_ << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
         << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
    svg_ << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
         << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
    svg_ << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << opt_.height - 14
         << "\" font-size=\"13\" text-anchor=\"middle\">" << opt_.x_label
         << "</text>\n";
    svg_ << "<text x=\"16\" y=\"" << (y0 + y1) / 2
         << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
            "16 "
         << (y0 + y1) / 2 << ")\">" << opt_.y_label << "</text>\n";
    svg_ << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"22\" font-size=\"15\" "
            "text-anchor=\"middle\">"
         << opt_.title << "</text>\n";
  }

  void band(const Band& b) {
    svg_ << "<polygon fill=\"" << b.color << "\" fill-opacity=\"0.2\" "
            "stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      svg_ << sx(b.x[i]) << "," << sy(b.hi[i]) << " ";
    }
    for (std::size_t i = b.x.size(); i-- > 0;) {
      svg_ << sx(b.x[i]) << "," << sy(b.lo[i]) << " ";
    }
    svg_ << "\"/>\n";
  }

  void polyline(const Series& s) {
    svg_ << "<polyline fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1.6\"";
    if (s.dashed) svg_ << " stroke-dasharray=\"6,4\"";
    svg_ << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg_ << sx(s.x[i]) << "," << sy(s.y[i]) << " ";
    }
    svg_ << "\"/>\n";
  }

  void legend(const std::vector<Series>& series) {
    int y = kMarginTop + 8;
    for (const Series& s : series) {
      if (s.label.empty()) continue;
      const int x = kMarginLeft + 12;
      svg_ << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 26
           << "\" y2=\"" << y << "\" stroke=\"" << s.color
           << "\" stroke-width=\"2\"";
      if (s.dashed) svg_ << " stroke-dasharray=\"6,4\"";
      svg_ << "/>\n<text x=\"" << x + 32 << "\" y=\"" << y + 4
           << "\" font-size=\"12\">" << s.label << "</text>\n";
      y += 18;
    }
  }

  void box(double cx, double half_width, const BoxStat& b) {
    const double wlo = sy(b.p5), whi = sy(b.p95);
    const double blo = sy(b.p25), bhi = sy(b.p75);
    const double med = sy(b.p50);
    svg_ << "<line x1=\"" << cx << "\" y1=\"" << wlo << "\" x2=\"" << cx
         << "\" y2=\"" << whi << "\" stroke=\"#333\"/>\n";
    for (double w : {wlo, whi}) {
      svg_ << "<line x1=\"" << cx - half_width / 2 << "\" y1=\"" << w
           << "\" x2=\"" << cx + half_width / 2 << "\" y2=\"" << w
           << "\" stroke=\"#333\"/>\n";
    }
    svg_ << "<rect x=\"" << cx - half_width << "\" y=\"" << bhi
         << "\" width=\"" << 2 * half_width << "\" height=\"" << blo - bhi
         << "\" fill=\"#1f77b4\" fill-opacity=\"0.45\" stroke=\"#333\"/>\n";
    svg_ << "<line x1=\"" << cx - half_width << "\" y1=\"" << med
         << "\" x2=\"" << cx + half_width << "\" y2=\"" << med
         << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }

  void raw(const std::string& s) { svg_ << s; }

  void save(const std::string& path) {
    svg_ << "</svg>\n";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw IoError("cannot write " + path);
    }
    out << svg_.str();
  }

 private:
  ChartOptions opt_;
  Range xr_, yr_;
  std::ostringstream svg_;
};

}  // namespace

void write_line_chart(const std::string& path, const ChartOptions& options,
                      const std::vector<Series>& series,
                      const std::vector<Band>& bands) {
  Range xr, yr;
  for (const Series& s : series) {
    for (double v : s.x) xr.expand(v);
    for (double v : s.y) yr.expand(v);
  }
  for (const Band& b : bands) {
    for (double v : b.x) xr.expand(v);
    for (double v : b.lo) yr.expand(v);
    for (double v : b.hi) yr.expand(v);
  }
  xr.pad();
  yr.pad();
  Canvas canvas(options, xr, yr);
  canvas.axes();
  for (const Band& b : bands) canvas.band(b);
  for (const Series& s : series) canvas.polyline(s);
  canvas.legend(series);
  canvas.save(path);
}

void write_box_chart(const std::string& path, const ChartOptions& options,
                     const std::vector<BoxStat>& boxes) {
  Range xr, yr;
  xr.expand(0);
  xr.expand(static_cast<double>(boxes.size()) + 1);
  for (const BoxStat& b : boxes) {
    yr.expand(b.p5);
    yr.expand(b.p95);
  }
  yr.pad();
  Canvas canvas(options, xr, yr);
  canvas.axes();
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const double cx = canvas.sx(static_cast<double>(i) + 1.0);
    canvas.box(cx, 22, boxes[i]);
    std::ostringstream label;
    label << "<text x=\"" << cx << "\" y=\""
          << options.height - kMarginBottom + 34
          << "\" font-size=\"12\" text-anchor=\"middle\">" << boxes[i].label
          << "</text>\n";
    canvas.raw(label.str());
  }
  canvas.save(path);
}

}  // namespace cipherfleet::svg
