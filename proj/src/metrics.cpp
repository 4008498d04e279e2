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

#include "skatemount/metrics.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace skatemount {
namespace {

std::string format_double(double value, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, value);
  return std::string(buf);
}

}  // namespace

std::string metrics_csv_header() {
  return "iteration,wall_s,mean_ep_reward,mean_ep_len,term_timeout,term_fell,"
         "term_flip,loss_surrogate,loss_value,entropy,kl,lr";
}

std::string format_metrics_row(const TrainStats& row) {
  std::string line = std::to_string(row.iteration);
  line += "," + format_double(row.wall_s, "%.3f");
  line += "," + format_double(row.mean_ep_reward, "%.9g");
  line += "," + format_double(row.mean_ep_len, "%.9g");
  line += "," + std::to_string(row.term_timeout);
  line += "," + std::to_string(row.term_fell);
  line += "," + std::to_string(row.term_flip);
  line += "," + format_double(row.loss_surrogate, "%.9g");
  line += "," + format_double(row.loss_value, "%.9g");
  line += "," + format_double(row.entropy, "%.9g");
  line += "," + format_double(row.kl, "%.9g");
  line += "," + format_double(row.lr, "%.9g");
  return line;
}

MetricsWriter::MetricsWriter(const std::string& path, uint64_t config_hash,
                             uint64_t seed)
    : path_(path), out_(path, std::ios::trunc) {
  if (!out_) {
    throw std::runtime_error("metrics: cannot write '" + path + "'");
  }
  char preamble[96];
  std::snprintf(preamble, sizeof(preamble),
                "# config_hash=%016llx seed=%llu",
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  out_ << preamble << "\n" << metrics_csv_header() << "\n";
  out_.flush();
}

void MetricsWriter::append(const TrainStats& row) {
  out_ << format_metrics_row(row) << "\n";
  out_.flush();
  if (!out_) {
    throw std::runtime_error("metrics: write to '" + path_ + "' failed");
  }
}

MetricsFile read_metrics_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("metrics: cannot open '" + path + "'");
  }
  MetricsFile file;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      unsigned long long hash = 0, seed = 0;
      if (std::sscanf(line.c_str(), "# config_hash=%llx seed=%llu", &hash,
                      &seed) == 2) {
        file.config_hash = static_cast<uint64_t>(hash);
        file.seed = static_cast<uint64_t>(seed);
      }
      continue;
    }
    if (line == metrics_csv_header()) continue;
    TrainStats row;
    double wall = 0.0;
    const int matched = std::sscanf(
        line.c_str(), "%d,%lf,%lf,%lf,%d,%d,%d,%lf,%lf,%lf,%lf,%lf",
        &row.iteration, &wall, &row.mean_ep_reward, &row.mean_ep_len,
        &row.term_timeout, &row.term_fell, &row.term_flip, &row.loss_surrogate,
        &row.loss_value, &row.entropy, &row.kl, &row.lr);
    if (matched != 12) {
      file.malformed_rows += 1;
      continue;
    }
    row.wall_s = wall;
    file.rows.push_back(row);
  }
  return file;
}

}  // namespace skatemount
