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

#include "skatemount/ppo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "skatemount/gae.hpp"
#include "skatemount/mlp.hpp"

namespace skatemount {
namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1.0e-8;

template <typename Block>
void adam_update_block(Block& param, Block& m, Block& v, const Block& grad,
                       double corrected_lr, double bias2) {
  m = kAdamBeta1 * m + (1.0 - kAdamBeta1) * grad;
  v = (kAdamBeta2 * v.array() + (1.0 - kAdamBeta2) * grad.array().square())
          .matrix();
  param.array() -=
      corrected_lr * m.array() / ((v.array() / bias2).sqrt() + kAdamEpsilon);
}

double squared_norm(const PolicyGrads& grads) {
  double total = 0.0;
  for (const auto& w : grads.actor.weights) total += w.squaredNorm();
  for (const auto& b : grads.actor.biases) total += b.squaredNorm();
  for (const auto& w : grads.critic.weights) total += w.squaredNorm();
  for (const auto& b : grads.critic.biases) total += b.squaredNorm();
  total += grads.log_std.squaredNorm();
  return total;
}

void scale_grads(PolicyGrads& grads, double scale) {
  for (auto& w : grads.actor.weights) w *= scale;
  for (auto& b : grads.actor.biases) b *= scale;
  for (auto& w : grads.critic.weights) w *= scale;
  for (auto& b : grads.critic.biases) b *= scale;
  grads.log_std *= scale;
}

}  // namespace

void RolloutBuffer::resize(int steps_per_env, int num_envs, int obs_dim,
                           int critic_obs_dim, int action_dim) {
  if (steps_per_env <= 0 || num_envs <= 0) {
    throw std::invalid_argument("RolloutBuffer: dimensions must be positive");
  }
  steps = steps_per_env;
  envs = num_envs;
  const int n = steps * envs;
  observations.resize(n, obs_dim);
  critic_observations.resize(n, critic_obs_dim);
  actions.resize(n, action_dim);
  mean_old.resize(n, action_dim);
  log_std_old.resize(action_dim);
  log_probs.resize(n);
  values.resize(n);
  rewards.resize(n);
  dones.assign(static_cast<size_t>(n), 0);
  advantages.resize(n);
  returns.resize(n);
}

void finalize_rollout(RolloutBuffer& buffer,
                      const Eigen::VectorXd& bootstrap_values, double gamma,
                      double lam) {
  if (bootstrap_values.size() != buffer.envs) {
    throw std::invalid_argument(
        "finalize_rollout: one bootstrap value per environment required");
  }
  const int steps = buffer.steps;
  const int envs = buffer.envs;
  std::vector<double> rewards(steps), values(steps);
  std::vector<uint8_t> dones(steps);
  for (int e = 0; e < envs; ++e) {
    for (int t = 0; t < steps; ++t) {
      const int row = t * envs + e;
      rewards[static_cast<size_t>(t)] = buffer.rewards(row);
      values[static_cast<size_t>(t)] = buffer.values(row);
      dones[static_cast<size_t>(t)] = buffer.dones[static_cast<size_t>(row)];
    }
    const auto gae =
        compute_gae(rewards, values, dones, bootstrap_values(e), gamma, lam);
    for (int t = 0; t < steps; ++t) {
      const int row = t * envs + e;
      buffer.advantages(row) = gae.advantages[static_cast<size_t>(t)];
      buffer.returns(row) = gae.returns[static_cast<size_t>(t)];
    }
  }
  // Whole-buffer normalization with the population standard deviation.
  const double mean = buffer.advantages.mean();
  const double variance =
      (buffer.advantages.array() - mean).square().mean();
  const double stddev = std::sqrt(variance);
  if (stddev > 1.0e-12) {
    buffer.advantages = (buffer.advantages.array() - mean) / stddev;
  } else {
    buffer.advantages.array() -= mean;
  }
}

double adapt_lr(double current_lr, double measured_kl, double desired_kl) {
  if (measured_kl > 2.0 * desired_kl) {
    return std::max(1.0e-5, current_lr / 1.5);
  }
  if (measured_kl < desired_kl / 2.0) {
    return std::min(1.0e-2, current_lr * 1.5);
  }
  return current_lr;
}

PolicyGrads make_zero_policy_grads(const GaussianPolicy& policy) {
  PolicyGrads grads;
  grads.actor = make_zero_grads(policy.actor);
  grads.critic = make_zero_grads(policy.critic);
  grads.log_std = Eigen::VectorXd::Zero(policy.log_std.size());
  return grads;
}

AdamState make_adam_state(const GaussianPolicy& policy) {
  AdamState state;
  state.m = make_zero_policy_grads(policy);
  state.v = make_zero_policy_grads(policy);
  state.step = 0;
  return state;
}

void adam_step(GaussianPolicy& policy, AdamState& state,
               const PolicyGrads& grads, double learning_rate) {
  state.step += 1;
  const double bias1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
  const double corrected_lr = learning_rate / bias1;
  for (size_t l = 0; l < policy.actor.weights.size(); ++l) {
    adam_update_block(policy.actor.weights[l], state.m.actor.weights[l],
                      state.v.actor.weights[l], grads.actor.weights[l],
                      corrected_lr, bias2);
    adam_update_block(policy.actor.biases[l], state.m.actor.biases[l],
                      state.v.actor.biases[l], grads.actor.biases[l],
                      corrected_lr, bias2);
  }
  for (size_t l = 0; l < policy.critic.weights.size(); ++l) {
    adam_update_block(policy.critic.weights[l], state.m.critic.weights[l],
                      state.v.critic.weights[l], grads.critic.weights[l],
                      corrected_lr, bias2);
    adam_update_block(policy.critic.biases[l], state.m.critic.biases[l],
                      state.v.critic.biases[l], grads.critic.biases[l],
                      corrected_lr, bias2);
  }
  adam_update_block(policy.log_std, state.m.log_std, state.v.log_std,
                    grads.log_std, corrected_lr, bias2);
}

double clip_global_grad_norm(PolicyGrads& grads, double max_norm) {
  const double norm = std::sqrt(squared_norm(grads));
  if (max_norm > 0.0 && norm > max_norm) {
    scale_grads(grads, max_norm / norm);
  }
  return norm;
}

PpoLossTerms ppo_loss_and_grads(const GaussianPolicy& policy,
                                const RolloutBuffer& buffer,
                                const std::vector<int>& indices,
                                const PpoConfig& cfg, PolicyGrads* grads) {
  const int batch = static_cast<int>(indices.size());
  if (batch == 0) {
    throw std::invalid_argument("ppo_loss_and_grads: empty minibatch");
  }
  const int action_dim = policy.action_dim();
  const double clip = cfg.clip_param;

  Eigen::MatrixXd obs(batch, policy.obs_dim());
  Eigen::MatrixXd cobs(batch, policy.critic_obs_dim());
  Eigen::MatrixXd actions(batch, action_dim);
  Eigen::MatrixXd mean_old(batch, action_dim);
  Eigen::VectorXd logp_old(batch), values_old(batch), advantages(batch),
      returns(batch);
  for (int i = 0; i < batch; ++i) {
    const int row = indices[static_cast<size_t>(i)];
    obs.row(i) = buffer.observations.row(row);
    cobs.row(i) = buffer.critic_observations.row(row);
    actions.row(i) = buffer.actions.row(row);
    mean_old.row(i) = buffer.mean_old.row(row);
    logp_old(i) = buffer.log_probs(row);
    values_old(i) = buffer.values(row);
    advantages(i) = buffer.advantages(row);
    returns(i) = buffer.returns(row);
  }

  MlpWorkspace actor_ws, critic_ws;
  const Eigen::MatrixXd mean_new = mlp_forward_cached(policy.actor, obs, actor_ws);
  const Eigen::MatrixXd value_out =
      mlp_forward_cached(policy.critic, cobs, critic_ws);

  const Eigen::ArrayXd sigma = policy.log_std.array().exp();
  const double log_std_sum = policy.log_std.sum();
  constexpr double kLogTwoPi = 1.8378770664093454836;

  // z = (a - mu) / sigma, reused by the log density and both gradients.
  Eigen::MatrixXd z(batch, action_dim);
  Eigen::VectorXd logp_new(batch);
  for (int i = 0; i < batch; ++i) {
    double sq = 0.0;
    for (int j = 0; j < action_dim; ++j) {
      const double zij = (actions(i, j) - mean_new(i, j)) / sigma(j);
      z(i, j) = zij;
      sq += zij * zij;
    }
    logp_new(i) = -0.5 * sq - log_std_sum - 0.5 * action_dim * kLogTwoPi;
  }

  PpoLossTerms terms;
  const double inv_batch = 1.0 / static_cast<double>(batch);
  Eigen::VectorXd logp_grad = Eigen::VectorXd::Zero(batch);
  double surrogate_sum = 0.0;
  for (int i = 0; i < batch; ++i) {
    const double ratio = std::exp(logp_new(i) - logp_old(i));
    const double unclipped = ratio * advantages(i);
    const double clamped_ratio = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
    const double clipped = clamped_ratio * advantages(i);
    surrogate_sum += std::min(unclipped, clipped);
    const bool use_unclipped = unclipped <= clipped;
    const bool in_band = ratio > 1.0 - clip && ratio < 1.0 + clip;
    if (use_unclipped || in_band) {
      logp_grad(i) = -inv_batch * ratio * advantages(i);
    }
  }
  terms.surrogate = -surrogate_sum * inv_batch;

  Eigen::VectorXd value_grad = Eigen::VectorXd::Zero(batch);
  double value_sum = 0.0;
  for (int i = 0; i < batch; ++i) {
    const double err = value_out(i, 0) - returns(i);
    if (cfg.use_clipped_value_loss) {
      const double delta =
          std::clamp(value_out(i, 0) - values_old(i), -clip, clip);
      const double err_clipped = values_old(i) + delta - returns(i);
      if (err * err >= err_clipped * err_clipped) {
        value_sum += err * err;
        value_grad(i) = 2.0 * inv_batch * err;
      } else {
        value_sum += err_clipped * err_clipped;
        const bool pass_through =
            value_out(i, 0) - values_old(i) > -clip &&
            value_out(i, 0) - values_old(i) < clip;
        value_grad(i) = pass_through ? 2.0 * inv_batch * err_clipped : 0.0;
      }
    } else {
      value_sum += err * err;
      value_grad(i) = 2.0 * inv_batch * err;
    }
  }
  terms.value_loss = value_sum * inv_batch;

  terms.entropy = gaussian_entropy(policy.log_std);
  terms.total = terms.surrogate + cfg.value_loss_coef * terms.value_loss -
                cfg.entropy_coef * terms.entropy;
  terms.kl = mean_kl_divergence(mean_old, buffer.log_std_old, mean_new,
                                policy.log_std);

  if (grads != nullptr) {
    // d logp / d mu_j = z_j / sigma_j, d logp / d log_std_j = z_j^2 - 1.
    Eigen::MatrixXd mean_grad(batch, action_dim);
    for (int i = 0; i < batch; ++i) {
      for (int j = 0; j < action_dim; ++j) {
        mean_grad(i, j) = logp_grad(i) * z(i, j) / sigma(j);
        grads->log_std(j) += logp_grad(i) * (z(i, j) * z(i, j) - 1.0);
      }
    }
    grads->log_std.array() -= cfg.entropy_coef;
    mlp_backward(policy.actor, actor_ws, obs, mean_grad, grads->actor);
    const Eigen::MatrixXd value_out_grad =
        cfg.value_loss_coef * value_grad;
    mlp_backward(policy.critic, critic_ws, cobs, value_out_grad, grads->critic);
  }
  return terms;
}

UpdateStats ppo_update(GaussianPolicy& policy, AdamState& adam,
                       const RolloutBuffer& buffer, const PpoConfig& cfg,
                       double& learning_rate, Rng& rng) {
  const int n = buffer.size();
  if (n <= 0) {
    throw std::invalid_argument("ppo_update: empty rollout buffer");
  }
  const GaussianPolicy policy_snapshot = policy;
  const AdamState adam_snapshot = adam;
  const double lr_snapshot = learning_rate;

  UpdateStats stats;
  int updates = 0;
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < cfg.num_epochs; ++epoch) {
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(i) + 1));
      std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
    }
    for (int mb = 0; mb < cfg.num_minibatches; ++mb) {
      const int begin = static_cast<int>(
          static_cast<int64_t>(mb) * n / cfg.num_minibatches);
      const int end = static_cast<int>(
          static_cast<int64_t>(mb + 1) * n / cfg.num_minibatches);
      if (begin >= end) continue;
      const std::vector<int> indices(order.begin() + begin, order.begin() + end);
      PolicyGrads grads = make_zero_policy_grads(policy);
      const PpoLossTerms terms =
          ppo_loss_and_grads(policy, buffer, indices, cfg, &grads);
      if (!std::isfinite(terms.total)) {
        policy = policy_snapshot;
        adam = adam_snapshot;
        learning_rate = lr_snapshot;
        stats.aborted = true;
        stats.learning_rate = learning_rate;
        return stats;
      }
      if (cfg.schedule == "adaptive" && cfg.desired_kl > 0.0) {
        learning_rate = adapt_lr(learning_rate, terms.kl, cfg.desired_kl);
      }
      clip_global_grad_norm(grads, cfg.max_grad_norm);
      adam_step(policy, adam, grads, learning_rate);
      stats.surrogate_loss += terms.surrogate;
      stats.value_loss += terms.value_loss;
      stats.entropy += terms.entropy;
      stats.mean_kl += terms.kl;
      ++updates;
    }
  }
  if (updates > 0) {
    const double inv = 1.0 / static_cast<double>(updates);
    stats.surrogate_loss *= inv;
    stats.value_loss *= inv;
    stats.entropy *= inv;
    stats.mean_kl *= inv;
  }
  stats.learning_rate = learning_rate;
  return stats;
}

std::vector<TrainStats> train_stage(EnvBatch& env, GaussianPolicy& policy,
                                    AdamState& adam, double& learning_rate,
                                    const PpoConfig& cfg,
                                    const TrainOptions& options,
                                    uint64_t master_seed) {
  const int num_envs = env.num_envs();
  const int steps = cfg.steps_per_env;
  const int action_dim = policy.action_dim();
  if (env.obs_dim() != policy.obs_dim() ||
      env.critic_obs_dim() != policy.critic_obs_dim()) {
    throw std::invalid_argument(
        "train_stage: policy and environment dimensions differ");
  }

  RolloutBuffer buffer;
  buffer.resize(steps, num_envs, env.obs_dim(), env.critic_obs_dim(),
                action_dim);
  // One noise stream per environment, consumed in a fixed order on the
  // collection thread, keeps rollouts independent of physics threading.
  std::vector<Rng> action_rngs;
  action_rngs.reserve(static_cast<size_t>(num_envs));
  for (int i = 0; i < num_envs; ++i) {
    action_rngs.push_back(
        Rng::derive(master_seed, 1000 + static_cast<uint64_t>(i)));
  }
  Rng update_rng = Rng::derive(master_seed, 7777);

  Eigen::VectorXd episode_return = Eigen::VectorXd::Zero(num_envs);
  std::vector<int> episode_length(static_cast<size_t>(num_envs), 0);
  double last_mean_reward = 0.0;
  double last_mean_length = 0.0;

  std::vector<TrainStats> history;
  history.reserve(static_cast<size_t>(options.iterations));
  for (int iter = 1; iter <= options.iterations; ++iter) {
    const auto t_start = std::chrono::steady_clock::now();
    TrainStats row;
    row.iteration = iter;
    std::vector<double> finished_returns;
    std::vector<double> finished_lengths;

    for (int t = 0; t < steps; ++t) {
      const Eigen::MatrixXd obs = env.observations();
      const Eigen::MatrixXd cobs = env.critic_observations();
      const Eigen::MatrixXd mean = act_mean(policy, obs);
      const Eigen::VectorXd values = state_values(policy, cobs);
      Eigen::MatrixXd actions(num_envs, action_dim);
      Eigen::VectorXd log_probs(num_envs);
      for (int i = 0; i < num_envs; ++i) {
        for (int j = 0; j < action_dim; ++j) {
          actions(i, j) = mean(i, j) +
                          std::exp(policy.log_std(j)) *
                              action_rngs[static_cast<size_t>(i)].normal();
        }
        const Eigen::VectorXd mean_i = mean.row(i).transpose();
        const Eigen::VectorXd action_i = actions.row(i).transpose();
        log_probs(i) = gaussian_log_prob(mean_i, policy.log_std, action_i);
      }

      const EnvBatch::BatchStep out = env.step(actions);
      for (int i = 0; i < num_envs; ++i) {
        const int buf_row = t * num_envs + i;
        buffer.observations.row(buf_row) = obs.row(i);
        buffer.critic_observations.row(buf_row) = cobs.row(i);
        buffer.actions.row(buf_row) = actions.row(i);
        buffer.mean_old.row(buf_row) = mean.row(i);
        buffer.log_probs(buf_row) = log_probs(i);
        buffer.values(buf_row) = values(i);
        buffer.rewards(buf_row) = out.rewards(i);
        buffer.dones[static_cast<size_t>(buf_row)] =
            out.dones[static_cast<size_t>(i)];

        episode_return(i) += out.rewards(i);
        episode_length[static_cast<size_t>(i)] += 1;
        if (out.dones[static_cast<size_t>(i)]) {
          finished_returns.push_back(episode_return(i));
          finished_lengths.push_back(
              static_cast<double>(episode_length[static_cast<size_t>(i)]));
          episode_return(i) = 0.0;
          episode_length[static_cast<size_t>(i)] = 0;
          switch (out.causes[static_cast<size_t>(i)]) {
            case Termination::timeout: row.term_timeout += 1; break;
            case Termination::fell: row.term_fell += 1; break;
            case Termination::board_flipped: row.term_flip += 1; break;
            case Termination::running: break;
          }
        }
      }
    }

    buffer.log_std_old = policy.log_std;
    const Eigen::VectorXd bootstrap =
        state_values(policy, env.critic_observations());
    finalize_rollout(buffer, bootstrap, cfg.gamma, cfg.lam);
    const UpdateStats update =
        ppo_update(policy, adam, buffer, cfg, learning_rate, update_rng);

    if (!finished_returns.empty()) {
      last_mean_reward =
          std::accumulate(finished_returns.begin(), finished_returns.end(), 0.0) /
          static_cast<double>(finished_returns.size());
      last_mean_length =
          std::accumulate(finished_lengths.begin(), finished_lengths.end(), 0.0) /
          static_cast<double>(finished_lengths.size());
    }
    row.mean_ep_reward = last_mean_reward;
    row.mean_ep_len = last_mean_length;
    row.loss_surrogate = update.surrogate_loss;
    row.loss_value = update.value_loss;
    row.entropy = update.entropy;
    row.kl = update.mean_kl;
    row.lr = update.learning_rate;
    const auto t_end = std::chrono::steady_clock::now();
    row.wall_s = options.deterministic_timing
                     ? 0.0
                     : std::chrono::duration<double>(t_end - t_start).count();
    history.push_back(row);
    if (options.on_iteration) options.on_iteration(row);
    const bool cadence_hit =
        options.checkpoint_every > 0 && iter % options.checkpoint_every == 0;
    if (options.on_checkpoint && (cadence_hit || iter == options.iterations)) {
      options.on_checkpoint(iter);
    }
  }
  return history;
}

}  // namespace skatemount
