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

#ifndef SKATEMOUNT_METRICS_HPP_
#define SKATEMOUNT_METRICS_HPP_

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "skatemount/ppo.hpp"

namespace skatemount {

// Column order is part of the file contract; downstream tooling keys on it.
std::string metrics_csv_header();

std::string format_metrics_row(const TrainStats& row);

// One CSV per training run: a '#' comment line carrying the config hash and
// seed, the header, then one row per iteration. Rows are flushed as written
// so an interrupted run still leaves a usable file.
class MetricsWriter {
 public:
  MetricsWriter(const std::string& path, uint64_t config_hash, uint64_t seed);

  void append(const TrainStats& row);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

struct MetricsFile {
  uint64_t config_hash = 0;
  uint64_t seed = 0;
  std::vector<TrainStats> rows;
  int malformed_rows = 0;  // skipped lines, header and comments excluded
};

// Tolerant reader: malformed rows are counted and skipped, never fatal.
MetricsFile read_metrics_file(const std::string& path);

}  // namespace skatemount

#endif  // SKATEMOUNT_METRICS_HPP_
