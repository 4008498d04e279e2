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

#include "skatemount/policy.hpp"

#include <cmath>

namespace skatemount {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;  // ln(2*pi)
}

GaussianPolicy make_policy(int obs_dim, int critic_obs_dim, int action_dim,
                           const std::vector<int>& hidden_dims,
                           double initial_std, Rng& rng) {
  std::vector<int> actor_widths;
  actor_widths.push_back(obs_dim);
  actor_widths.insert(actor_widths.end(), hidden_dims.begin(), hidden_dims.end());
  actor_widths.push_back(action_dim);

  std::vector<int> critic_widths;
  critic_widths.push_back(critic_obs_dim);
  critic_widths.insert(critic_widths.end(), hidden_dims.begin(), hidden_dims.end());
  critic_widths.push_back(1);

  GaussianPolicy policy;
  policy.actor = make_mlp(actor_widths, 0.01, rng);
  policy.critic = make_mlp(critic_widths, 1.0, rng);
  policy.log_std =
      Eigen::VectorXd::Constant(action_dim, std::log(initial_std));
  return policy;
}

Eigen::MatrixXd act_mean(const GaussianPolicy& policy,
                         const Eigen::MatrixXd& observations) {
  return mlp_forward(policy.actor, observations);
}

Eigen::VectorXd state_values(const GaussianPolicy& policy,
                             const Eigen::MatrixXd& critic_observations) {
  return mlp_forward(policy.critic, critic_observations).col(0);
}

double gaussian_log_prob(const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std,
                         const Eigen::VectorXd& action) {
  const Eigen::ArrayXd std = log_std.array().exp();
  const Eigen::ArrayXd z = (action - mean).array() / std;
  return -0.5 * z.square().sum() - log_std.sum() -
         0.5 * kLogTwoPi * static_cast<double>(mean.size());
}

double gaussian_entropy(const Eigen::VectorXd& log_std) {
  return log_std.sum() +
         0.5 * (1.0 + kLogTwoPi) * static_cast<double>(log_std.size());
}

double mean_kl_divergence(const Eigen::MatrixXd& mean_old,
                          const Eigen::VectorXd& log_std_old,
                          const Eigen::MatrixXd& mean_new,
                          const Eigen::VectorXd& log_std_new) {
  const Eigen::ArrayXd var_old = (2.0 * log_std_old.array()).exp();
  const Eigen::ArrayXd var_new = (2.0 * log_std_new.array()).exp();
  const Eigen::ArrayXd log_ratio = log_std_new.array() - log_std_old.array();
  double total = 0.0;
  for (Eigen::Index i = 0; i < mean_old.rows(); ++i) {
    const Eigen::ArrayXd diff =
        (mean_old.row(i) - mean_new.row(i)).transpose().array();
    total += (log_ratio + (var_old + diff.square()) / (2.0 * var_new) - 0.5).sum();
  }
  return total / static_cast<double>(mean_old.rows());
}

std::pair<Eigen::VectorXd, double> sample_action(const GaussianPolicy& policy,
                                                 const Eigen::VectorXd& observation,
                                                 Rng& rng) {
  const Eigen::VectorXd mean =
      mlp_forward(policy.actor, observation.transpose()).row(0);
  Eigen::VectorXd action(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    action[i] = mean[i] + std::exp(policy.log_std[i]) * rng.normal();
  }
  return {action, gaussian_log_prob(mean, policy.log_std, action)};
}

}  // namespace skatemount
