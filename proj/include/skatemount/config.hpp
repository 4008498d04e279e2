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

#ifndef SKATEMOUNT_CONFIG_HPP_
#define SKATEMOUNT_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "skatemount/env.hpp"
#include "skatemount/ppo.hpp"

namespace skatemount {

struct RunConfig {
  uint64_t seed = 42;
  int num_envs = 4096;
  std::string output_dir;  // empty: $SKATEMOUNT_OUTPUT_DIR, then ./runs
  int checkpoint_every = 50;
  bool deterministic_timing = false;
  PhysicsConfig physics;
  SkateboardParamsd board;
  QuadrupedParamsd robot;
  double action_scale = 0.25;
  double edge_point_spacing = 0.1;
  PpoConfig ppo;
  std::vector<StageConfig> stages;
};

// Full curriculum at production scale; desk runs override seed, num_envs,
// iterations, and hidden_dims on the command line or in a derived file.
RunConfig default_run_config();

EnvParams make_env_params(const RunConfig& cfg);

// JSON is an overlay: absent keys keep their defaults, each stage entry
// starts from the preset named by its "id". Inertia tensors are stored as
// their diagonals.
nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
void save_run_config(const std::string& path, const RunConfig& cfg);

enum class ConfigSeverity { warning, error };

struct ConfigIssue {
  ConfigSeverity severity = ConfigSeverity::warning;
  std::string path;  // dotted location, e.g. "stages[2].spawn_square_side"
  std::string message;
};

std::vector<ConfigIssue> validate_run_config(const RunConfig& cfg);

// FNV-1a over the canonical (key-sorted) JSON dump. Scheduling knobs such as
// thread counts are deliberately not part of RunConfig, so replays on a
// different core count hash identically.
uint64_t config_hash(const RunConfig& cfg);

}  // namespace skatemount

#endif  // SKATEMOUNT_CONFIG_HPP_
