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

#include "skatemount/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace skatemount {
namespace {

constexpr char kMagic[8] = {'S', 'K', 'M', 'T', 'C', 'K', 'P', 'T'};
constexpr uint32_t kVersion = 1;

void write_bytes(std::ofstream& out, const void* data, size_t size) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

void write_u32(std::ofstream& out, uint32_t value) {
  write_bytes(out, &value, sizeof(value));
}

void write_u64(std::ofstream& out, uint64_t value) {
  write_bytes(out, &value, sizeof(value));
}

void write_f64(std::ofstream& out, double value) {
  write_bytes(out, &value, sizeof(value));
}

void write_mlp(std::ofstream& out, const MlpParams& params) {
  write_u32(out, static_cast<uint32_t>(params.num_layers()));
  for (int l = 0; l < params.num_layers(); ++l) {
    const auto& w = params.weights[static_cast<size_t>(l)];
    write_u32(out, static_cast<uint32_t>(w.rows()));
    write_u32(out, static_cast<uint32_t>(w.cols()));
    write_bytes(out, w.data(), sizeof(double) * static_cast<size_t>(w.size()));
    const auto& b = params.biases[static_cast<size_t>(l)];
    write_bytes(out, b.data(), sizeof(double) * static_cast<size_t>(b.size()));
  }
}

class Reader {
 public:
  Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) {
      throw std::runtime_error("checkpoint: cannot open '" + path + "'");
    }
  }

  void read_bytes(void* data, size_t size) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (static_cast<size_t>(in_.gcount()) != size) {
      throw std::runtime_error("checkpoint: '" + path_ + "' is truncated");
    }
  }

  uint32_t read_u32() {
    uint32_t value = 0;
    read_bytes(&value, sizeof(value));
    return value;
  }

  uint64_t read_u64() {
    uint64_t value = 0;
    read_bytes(&value, sizeof(value));
    return value;
  }

  double read_f64() {
    double value = 0.0;
    read_bytes(&value, sizeof(value));
    return value;
  }

  MlpParams read_mlp() {
    const uint32_t layers = read_u32();
    if (layers == 0 || layers > 64) {
      throw std::runtime_error("checkpoint: '" + path_ +
                               "' has an implausible layer count");
    }
    MlpParams params;
    int64_t expected_cols = -1;
    for (uint32_t l = 0; l < layers; ++l) {
      const uint32_t rows = read_u32();
      const uint32_t cols = read_u32();
      if (rows == 0 || cols == 0 || rows > 65536 || cols > 65536) {
        throw std::runtime_error("checkpoint: '" + path_ +
                                 "' has an implausible layer shape");
      }
      if (expected_cols >= 0 && static_cast<int64_t>(cols) != expected_cols) {
        throw std::runtime_error("checkpoint: '" + path_ +
                                 "' has inconsistent layer shapes");
      }
      expected_cols = static_cast<int64_t>(rows);
      Eigen::MatrixXd w(rows, cols);
      read_bytes(w.data(), sizeof(double) * static_cast<size_t>(w.size()));
      Eigen::VectorXd b(rows);
      read_bytes(b.data(), sizeof(double) * static_cast<size_t>(b.size()));
      params.weights.push_back(std::move(w));
      params.biases.push_back(std::move(b));
    }
    return params;
  }

  void expect_end() {
    char extra = 0;
    in_.read(&extra, 1);
    if (in_.gcount() != 0) {
      throw std::runtime_error("checkpoint: '" + path_ +
                               "' has trailing bytes");
    }
  }

 private:
  std::string path_;
  std::ifstream in_;
};

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("checkpoint: cannot write '" + tmp + "'");
    }
    write_bytes(out, kMagic, sizeof(kMagic));
    write_u32(out, kVersion);
    write_u32(out, static_cast<uint32_t>(checkpoint.policy.obs_dim()));
    write_u32(out, static_cast<uint32_t>(checkpoint.policy.critic_obs_dim()));
    write_u32(out, static_cast<uint32_t>(checkpoint.policy.action_dim()));
    write_mlp(out, checkpoint.policy.actor);
    write_mlp(out, checkpoint.policy.critic);
    write_bytes(out, checkpoint.policy.log_std.data(),
                sizeof(double) *
                    static_cast<size_t>(checkpoint.policy.log_std.size()));
    write_f64(out, checkpoint.learning_rate);
    write_u64(out, static_cast<uint64_t>(checkpoint.iteration));
    write_u64(out, checkpoint.master_seed);
    out.flush();
    if (!out) {
      throw std::runtime_error("checkpoint: write to '" + tmp + "' failed");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("checkpoint: cannot move '" + tmp + "' to '" +
                             path + "'");
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  Reader reader(path);
  char magic[8] = {};
  reader.read_bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("checkpoint: '" + path +
                             "' is not a checkpoint file");
  }
  const uint32_t version = reader.read_u32();
  if (version != kVersion) {
    throw std::runtime_error("checkpoint: '" + path +
                             "' has unsupported version " +
                             std::to_string(version));
  }
  const uint32_t obs_dim = reader.read_u32();
  const uint32_t critic_obs_dim = reader.read_u32();
  const uint32_t action_dim = reader.read_u32();

  Checkpoint checkpoint;
  checkpoint.policy.actor = reader.read_mlp();
  checkpoint.policy.critic = reader.read_mlp();
  checkpoint.policy.log_std.resize(static_cast<int>(action_dim));
  reader.read_bytes(checkpoint.policy.log_std.data(),
                    sizeof(double) * action_dim);
  checkpoint.learning_rate = reader.read_f64();
  checkpoint.iteration = static_cast<int64_t>(reader.read_u64());
  checkpoint.master_seed = reader.read_u64();
  reader.expect_end();

  if (checkpoint.policy.actor.input_dim() != static_cast<int>(obs_dim) ||
      checkpoint.policy.critic.input_dim() != static_cast<int>(critic_obs_dim) ||
      checkpoint.policy.actor.output_dim() != static_cast<int>(action_dim) ||
      checkpoint.policy.critic.output_dim() != 1) {
    throw std::runtime_error("checkpoint: '" + path +
                             "' header dimensions do not match its parameters");
  }
  return checkpoint;
}

}  // namespace skatemount
