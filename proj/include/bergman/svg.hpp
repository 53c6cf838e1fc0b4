/*
 * Copyright 2026 The bergman authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace bergman {

struct SvgSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Writes a small standalone SVG line chart; no external plotting deps.
inline void svg_line_chart(const std::string& path, const std::string& title,
                           const std::string& xlabel, const std::string& ylabel,
                           const std::vector<SvgSeries>& series) {
  const int W = 640, H = 420, ML = 70, MR = 20, MT = 40, MB = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  auto px = [&](double x) {
    return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR);
  };
  auto py = [&](double y) {
    return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB);
  };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return std::string(buf);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};
  std::ofstream out(path, std::ios::binary);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W
      << "' height='" << H << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << W / 2 << "' y='22' text-anchor='middle' "
      << "font-size='15'>" << title << "</text>\n";
  out << "<line x1='" << ML << "' y1='" << H - MB << "' x2='" << W - MR
      << "' y2='" << H - MB << "' stroke='black'/>\n";
  out << "<line x1='" << ML << "' y1='" << MT << "' x2='" << ML << "' y2='"
      << H - MB << "' stroke='black'/>\n";
  out << "<text x='" << (ML + W - MR) / 2 << "' y='" << H - 12
      << "' text-anchor='middle' font-size='12'>" << xlabel << "</text>\n";
  out << "<text x='16' y='" << (MT + H - MB) / 2
      << "' font-size='12' transform='rotate(-90 16 " << (MT + H - MB) / 2
      << ")' text-anchor='middle'>" << ylabel << "</text>\n";
  out << "<text x='" << ML << "' y='" << H - MB + 16
      << "' font-size='10' text-anchor='middle'>" << fmt(xmin) << "</text>\n";
  out << "<text x='" << W - MR << "' y='" << H - MB + 16
      << "' font-size='10' text-anchor='middle'>" << fmt(xmax) << "</text>\n";
  out << "<text x='" << ML - 6 << "' y='" << H - MB
      << "' font-size='10' text-anchor='end'>" << fmt(ymin) << "</text>\n";
  out << "<text x='" << ML - 6 << "' y='" << MT + 4
      << "' font-size='10' text-anchor='end'>" << fmt(ymax) << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* col = colors[si % 6];
    out << "<polyline fill='none' stroke='" << col << "' stroke-width='1.5' "
        << "points='";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << px(s.x[i]) << "," << py(s.y[i]) << " ";
    out << "'/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i])
          << "' r='2.2' fill='" << col << "'/>\n";
    out << "<text x='" << W - MR - 6 << "' y='" << MT + 14 + 14 * si
        << "' font-size='11' text-anchor='end' fill='" << col << "'>"
        << s.name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace bergman
