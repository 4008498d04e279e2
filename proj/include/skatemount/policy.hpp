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

#ifndef SKATEMOUNT_POLICY_HPP_
#define SKATEMOUNT_POLICY_HPP_

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "skatemount/mlp.hpp"
#include "skatemount/rng.hpp"

namespace skatemount {

// Diagonal-Gaussian actor with a state-independent learned log standard
// deviation, plus a separate value network that may consume a wider
// (privileged) observation than the actor.
struct GaussianPolicy {
  MlpParams actor;
  MlpParams critic;
  Eigen::VectorXd log_std;

  int obs_dim() const { return actor.input_dim(); }
  int critic_obs_dim() const { return critic.input_dim(); }
  int action_dim() const { return actor.output_dim(); }
};

// Orthogonal-initialized actor-critic; hidden widths are shared between the
// two networks, the policy head uses a small gain, log_std starts at
// ln(initial_std).
GaussianPolicy make_policy(int obs_dim, int critic_obs_dim, int action_dim,
                           const std::vector<int>& hidden_dims,
                           double initial_std, Rng& rng);

// Batched mean actions, one observation per row.
Eigen::MatrixXd act_mean(const GaussianPolicy& policy,
                         const Eigen::MatrixXd& observations);

// Batched state values.
Eigen::VectorXd state_values(const GaussianPolicy& policy,
                             const Eigen::MatrixXd& critic_observations);

// Log density of a diagonal Gaussian at one action.
double gaussian_log_prob(const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std,
                         const Eigen::VectorXd& action);

// Entropy of the diagonal Gaussian (state independent).
double gaussian_entropy(const Eigen::VectorXd& log_std);

// KL(old || new) between diagonal Gaussians with batched means.
double mean_kl_divergence(const Eigen::MatrixXd& mean_old,
                          const Eigen::VectorXd& log_std_old,
                          const Eigen::MatrixXd& mean_new,
                          const Eigen::VectorXd& log_std_new);

// Draws action ~ Normal(mean(obs), diag(exp(log_std))^2) and its log
// density. The noise stream is the caller's, so per-environment streams keep
// rollouts deterministic under any scheduling.
std::pair<Eigen::VectorXd, double> sample_action(const GaussianPolicy& policy,
                                                 const Eigen::VectorXd& observation,
                                                 Rng& rng);

}  // namespace skatemount

#endif  // SKATEMOUNT_POLICY_HPP_
