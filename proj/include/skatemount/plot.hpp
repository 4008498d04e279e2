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

#ifndef SKATEMOUNT_PLOT_HPP_
#define SKATEMOUNT_PLOT_HPP_

#include <string>
#include <vector>

#include "skatemount/ppo.hpp"

namespace skatemount {

// Standalone SVG of mean episode reward against iteration.
std::string render_reward_svg(const std::vector<TrainStats>& rows,
                              const std::string& title);

struct PlotResult {
  std::string output_path;
  int rows = 0;
  int malformed_rows = 0;
  bool written = false;  // false when the file had no usable rows
};

// Reads one metrics CSV and writes its reward curve next to output_path.
// Malformed rows are skipped; a file with no usable rows produces no SVG.
PlotResult plot_metrics(const std::string& metrics_path,
                        const std::string& output_path);

}  // namespace skatemount

#endif  // SKATEMOUNT_PLOT_HPP_
