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

#ifndef SKATEMOUNT_GAE_HPP_
#define SKATEMOUNT_GAE_HPP_

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace skatemount {

template <typename Scalar>
struct GaeResult {
  std::vector<Scalar> advantages;
  std::vector<Scalar> returns;
};

// Generalized advantage estimation over one trajectory segment:
//   delta_t = r_t + gamma * V_{t+1} * (1 - done_t) - V_t
//   A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
// with V_{T} given by bootstrap_value, and returns = advantages + values.
template <typename Scalar>
GaeResult<Scalar> compute_gae(const std::vector<Scalar>& rewards,
                              const std::vector<Scalar>& values,
                              const std::vector<uint8_t>& dones,
                              Scalar bootstrap_value, Scalar gamma,
                              Scalar lam) {
  const size_t steps = rewards.size();
  if (values.size() != steps || dones.size() != steps) {
    throw std::invalid_argument("compute_gae: sequence length mismatch");
  }
  GaeResult<Scalar> result;
  result.advantages.assign(steps, Scalar(0));
  result.returns.assign(steps, Scalar(0));
  Scalar next_advantage = Scalar(0);
  Scalar next_value = bootstrap_value;
  for (size_t i = steps; i-- > 0;) {
    const Scalar not_done = dones[i] ? Scalar(0) : Scalar(1);
    const Scalar delta = rewards[i] + gamma * next_value * not_done - values[i];
    next_advantage = delta + gamma * lam * not_done * next_advantage;
    result.advantages[i] = next_advantage;
    result.returns[i] = next_advantage + values[i];
    next_value = values[i];
  }
  return result;
}

}  // namespace skatemount

#endif  // SKATEMOUNT_GAE_HPP_
