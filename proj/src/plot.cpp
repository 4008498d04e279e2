// Copyright 2026 The skatemount Authors
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

#include "skatemount/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "skatemount/metrics.hpp"

namespace skatemount {
namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 920.0;
constexpr double kTop = 60.0;
constexpr double kBottom = 480.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::string(buf);
}

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_reward_svg(const std::vector<TrainStats>& rows,
                              const std::string& title) {
  if (rows.empty()) {
    throw std::invalid_argument("render_reward_svg: no rows to plot");
  }
  double x_min = rows.front().iteration, x_max = rows.front().iteration;
  double y_min = rows.front().mean_ep_reward, y_max = rows.front().mean_ep_reward;
  for (const auto& r : rows) {
    x_min = std::min(x_min, static_cast<double>(r.iteration));
    x_max = std::max(x_max, static_cast<double>(r.iteration));
    y_min = std::min(y_min, r.mean_ep_reward);
    y_max = std::max(y_max, r.mean_ep_reward);
  }
  if (x_max - x_min < 1.0) x_max = x_min + 1.0;
  if (y_max - y_min < 1.0e-9) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const auto map_x = [&](double x) {
    return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
  };
  const auto map_y = [&](double y) {
    return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg << "  <text x=\"" << kWidth / 2 << "\" y=\"32\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"18\">" << escape_xml(title)
      << "</text>\n";

  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / kTicks;
    const double px = map_x(fx);
    svg << "  <line x1=\"" << fmt(px) << "\" y1=\"" << kTop << "\" x2=\""
        << fmt(px) << "\" y2=\"" << kBottom
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "  <text x=\"" << fmt(px) << "\" y=\"" << kBottom + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\">" << fmt(std::round(fx)) << "</text>\n";

    const double fy = y_min + (y_max - y_min) * i / kTicks;
    const double py = map_y(fy);
    svg << "  <line x1=\"" << kLeft << "\" y1=\"" << fmt(py) << "\" x2=\""
        << kRight << "\" y2=\"" << fmt(py)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "  <text x=\"" << kLeft - 8 << "\" y=\"" << fmt(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"12\">" << fmt(fy) << "</text>\n";
  }

  svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\""
      << kRight << "\" y2=\"" << kBottom
      << "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
  svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kBottom
      << "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
  svg << "  <text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 44
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\">iteration</text>\n";
  svg << "  <text x=\"24\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\" transform=\"rotate(-90 24 " << (kTop + kBottom) / 2
      << ")\">mean episode reward</text>\n";

  svg << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" "
      << "points=\"";
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) svg << " ";
    svg << fmt(map_x(rows[i].iteration)) << ","
        << fmt(map_y(rows[i].mean_ep_reward));
  }
  svg << "\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

PlotResult plot_metrics(const std::string& metrics_path,
                        const std::string& output_path) {
  const MetricsFile file = read_metrics_file(metrics_path);
  PlotResult result;
  result.output_path = output_path;
  result.rows = static_cast<int>(file.rows.size());
  result.malformed_rows = file.malformed_rows;
  if (file.rows.empty()) {
    return result;
  }
  std::string title = metrics_path;
  const size_t slash = title.find_last_of('/');
  if (slash != std::string::npos) title = title.substr(slash + 1);
  const std::string svg = render_reward_svg(file.rows, title);
  std::ofstream out(output_path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("plot: cannot write '" + output_path + "'");
  }
  out << svg;
  result.written = true;
  return result;
}

}  // namespace skatemount
