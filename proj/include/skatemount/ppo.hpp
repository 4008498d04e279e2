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

#ifndef SKATEMOUNT_PPO_HPP_
#define SKATEMOUNT_PPO_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "skatemount/env.hpp"
#include "skatemount/policy.hpp"
#include "skatemount/rng.hpp"

namespace skatemount {

struct PpoConfig {
  double value_loss_coef = 1.0;
  bool use_clipped_value_loss = true;
  double clip_param = 0.2;
  double entropy_coef = 0.01;
  int num_epochs = 5;
  int num_minibatches = 4;
  double learning_rate = 1.0e-3;       // initial
  std::string schedule = "adaptive";   // "adaptive" or "fixed"
  double gamma = 0.99;
  double lam = 0.95;
  double desired_kl = 0.01;
  double max_grad_norm = 1.0;
  int steps_per_env = 24;
  std::vector<int> hidden_dims = {1024, 512, 256};
  double init_std = 1.0;
};

// Flat rollout storage; row index = step * num_envs + env.
struct RolloutBuffer {
  Eigen::MatrixXd observations;
  Eigen::MatrixXd critic_observations;
  Eigen::MatrixXd actions;
  Eigen::MatrixXd mean_old;
  Eigen::VectorXd log_std_old;
  Eigen::VectorXd log_probs;
  Eigen::VectorXd values;
  Eigen::VectorXd rewards;
  std::vector<uint8_t> dones;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;
  int steps = 0;
  int envs = 0;

  int size() const { return steps * envs; }
  void resize(int steps_per_env, int num_envs, int obs_dim, int critic_obs_dim,
              int action_dim);
};

// Fills advantages and returns from per-environment recursions, then
// normalizes the advantages over the whole buffer to zero mean and unit
// standard deviation (skipped for a degenerate spread).
void finalize_rollout(RolloutBuffer& buffer,
                      const Eigen::VectorXd& bootstrap_values, double gamma,
                      double lam);

// Adaptive-KL learning rate: divide by 1.5 above twice the target, multiply
// by 1.5 below half of it, bounded to [1e-5, 1e-2] when changed.
double adapt_lr(double current_lr, double measured_kl, double desired_kl);

struct PolicyGrads {
  MlpGrads actor;
  MlpGrads critic;
  Eigen::VectorXd log_std;
};

PolicyGrads make_zero_policy_grads(const GaussianPolicy& policy);

// Adam moments share the parameter layout; default decay constants.
struct AdamState {
  PolicyGrads m;
  PolicyGrads v;
  int64_t step = 0;
};

AdamState make_adam_state(const GaussianPolicy& policy);

void adam_step(GaussianPolicy& policy, AdamState& state,
               const PolicyGrads& grads, double learning_rate);

// Scales all gradients so the global norm does not exceed max_norm; returns
// the pre-clip norm.
double clip_global_grad_norm(PolicyGrads& grads, double max_norm);

struct PpoLossTerms {
  double surrogate = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double total = 0.0;
  double kl = 0.0;  // mean KL(old || new) over the minibatch
};

// Clipped-surrogate loss, clipped value loss, and entropy bonus over the
// minibatch rows given by indices, with analytic gradients. Pass nullptr to
// evaluate the loss only (used by the finite-difference oracle).
PpoLossTerms ppo_loss_and_grads(const GaussianPolicy& policy,
                                const RolloutBuffer& buffer,
                                const std::vector<int>& indices,
                                const PpoConfig& cfg, PolicyGrads* grads);

struct UpdateStats {
  double surrogate_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double mean_kl = 0.0;
  double learning_rate = 0.0;
  bool aborted = false;  // non-finite loss; parameters were restored
};

// One PPO update: num_epochs passes over num_minibatches shuffled minibatches
// with the adaptive learning rate applied before each step. On a non-finite
// loss the policy and optimizer are restored to their pre-update state.
UpdateStats ppo_update(GaussianPolicy& policy, AdamState& adam,
                       const RolloutBuffer& buffer, const PpoConfig& cfg,
                       double& learning_rate, Rng& rng);

struct TrainStats {
  int iteration = 0;
  double wall_s = 0.0;
  double mean_ep_reward = 0.0;
  double mean_ep_len = 0.0;
  int term_timeout = 0;
  int term_fell = 0;
  int term_flip = 0;
  double loss_surrogate = 0.0;
  double loss_value = 0.0;
  double entropy = 0.0;
  double kl = 0.0;
  double lr = 0.0;
};

struct TrainOptions {
  int iterations = 100;
  bool deterministic_timing = false;  // report wall_s as 0 for exact replays
  int checkpoint_every = 50;          // iterations; <= 0 disables the cadence
  std::function<void(const TrainStats&)> on_iteration;
  std::function<void(int)> on_checkpoint;  // cadence hits and the final iteration
};

// Rollout-update loop on one curriculum stage. Stats are returned per
// iteration; action noise uses one stream per environment so rollouts are
// identical under any environment-thread count.
std::vector<TrainStats> train_stage(EnvBatch& env, GaussianPolicy& policy,
                                    AdamState& adam, double& learning_rate,
                                    const PpoConfig& cfg,
                                    const TrainOptions& options,
                                    uint64_t master_seed);

}  // namespace skatemount

#endif  // SKATEMOUNT_PPO_HPP_
