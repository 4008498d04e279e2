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

#ifndef SKATEMOUNT_EVALUATE_HPP_
#define SKATEMOUNT_EVALUATE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "skatemount/env.hpp"
#include "skatemount/policy.hpp"

namespace skatemount {

struct EvalConfig {
  int episodes = 10;
  bool deterministic = true;  // mean action; otherwise sampled
  uint64_t seed = 123;
  std::string trajectory_dir;  // empty: no per-episode trajectory files
};

struct EpisodeResult {
  double total_reward = 0.0;
  int length = 0;  // control steps
  Termination cause = Termination::running;
  bool mounted = false;        // all four feet on the deck for a full second
  double time_to_mount = -1.0; // s, first deck contact to the start of that
                               // second; -1 when the episode never mounts
  double mean_feet = 0.0;      // deck contacts averaged over the episode
};

struct EvalSummary {
  int episodes = 0;
  double success_rate = 0.0;
  double mean_reward = 0.0;
  double mean_length = 0.0;
  double mean_feet = 0.0;
  double mean_time_to_mount = -1.0;  // over mounted episodes only
  std::vector<EpisodeResult> per_episode;
};

// Runs sequential episodes on one environment. Episode boundaries ride the
// environment's own termination and reset, so evaluation sees exactly the
// training distribution of the given stage.
EvalSummary evaluate_policy(const GaussianPolicy& policy,
                            const EnvParams& params, const StageConfig& stage,
                            const EvalConfig& cfg);

std::string format_eval_summary(const EvalSummary& summary);

}  // namespace skatemount

#endif  // SKATEMOUNT_EVALUATE_HPP_
