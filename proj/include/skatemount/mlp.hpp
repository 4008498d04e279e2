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

#ifndef SKATEMOUNT_MLP_HPP_
#define SKATEMOUNT_MLP_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "skatemount/rng.hpp"

namespace skatemount {

// Fully connected network with ELU on hidden layers and an identity output.
// Batches are row-major: one sample per row.
struct MlpParams {
  std::vector<Eigen::MatrixXd> weights;  // layer l: [width_{l+1} x width_l]
  std::vector<Eigen::VectorXd> biases;

  int input_dim() const { return static_cast<int>(weights.front().cols()); }
  int output_dim() const { return static_cast<int>(weights.back().rows()); }
  int num_layers() const { return static_cast<int>(weights.size()); }
};

// Gradients and Adam moments share the parameter layout.
using MlpGrads = MlpParams;

// Forward activations cached for backpropagation: pre[l] holds the affine
// output of layer l before ELU (the last layer has no activation).
struct MlpWorkspace {
  std::vector<Eigen::MatrixXd> pre;
  std::vector<Eigen::MatrixXd> post;
};

inline double elu(double x) { return x > 0.0 ? x : std::expm1(x); }

inline double elu_derivative_from_pre(double x) {
  return x > 0.0 ? 1.0 : std::exp(x);
}

// Orthogonal initialization: QR of a standard normal matrix with the sign of
// R's diagonal folded in, scaled by gain. Biases start at zero.
inline Eigen::MatrixXd orthogonal_matrix(int rows, int cols, double gain,
                                         Rng& rng) {
  const int big = std::max(rows, cols);
  const int small = std::min(rows, cols);
  Eigen::MatrixXd normal(big, small);
  for (int c = 0; c < small; ++c) {
    for (int r = 0; r < big; ++r) {
      normal(r, c) = rng.normal();
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(normal);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
  const Eigen::MatrixXd r_mat =
      qr.matrixQR().topLeftCorner(small, small).triangularView<Eigen::Upper>();
  for (int c = 0; c < small; ++c) {
    if (r_mat(c, c) < 0.0) {
      q.col(c) = -q.col(c);
    }
  }
  Eigen::MatrixXd result = rows >= cols ? q : Eigen::MatrixXd(q.transpose());
  return gain * result;
}

// widths = [input, hidden..., output]; hidden layers get gain sqrt(2), the
// output layer the given head gain.
inline MlpParams make_mlp(const std::vector<int>& widths, double head_gain,
                          Rng& rng) {
  if (widths.size() < 2) {
    throw std::invalid_argument("make_mlp: need at least input and output widths");
  }
  MlpParams params;
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    const bool last = l + 2 == widths.size();
    const double gain = last ? head_gain : std::sqrt(2.0);
    params.weights.push_back(
        orthogonal_matrix(widths[l + 1], widths[l], gain, rng));
    params.biases.push_back(Eigen::VectorXd::Zero(widths[l + 1]));
  }
  return params;
}

inline MlpGrads make_zero_grads(const MlpParams& params) {
  MlpGrads grads;
  for (size_t l = 0; l < params.weights.size(); ++l) {
    grads.weights.push_back(Eigen::MatrixXd::Zero(params.weights[l].rows(),
                                                  params.weights[l].cols()));
    grads.biases.push_back(Eigen::VectorXd::Zero(params.biases[l].size()));
  }
  return grads;
}

// Forward pass caching per-layer activations; input is [batch x input_dim].
inline Eigen::MatrixXd mlp_forward_cached(const MlpParams& params,
                                          const Eigen::MatrixXd& input,
                                          MlpWorkspace& workspace) {
  if (input.cols() != params.input_dim()) {
    throw std::invalid_argument("mlp_forward: input dimension mismatch");
  }
  const int layers = params.num_layers();
  workspace.pre.assign(layers, Eigen::MatrixXd());
  workspace.post.assign(layers, Eigen::MatrixXd());
  Eigen::MatrixXd x = input;
  for (int l = 0; l < layers; ++l) {
    workspace.pre[l] =
        (x * params.weights[l].transpose()).rowwise() +
        params.biases[l].transpose();
    if (l + 1 < layers) {
      workspace.post[l] = workspace.pre[l].unaryExpr([](double v) {
        return elu(v);
      });
      x = workspace.post[l];
    } else {
      workspace.post[l] = workspace.pre[l];
      x = workspace.post[l];
    }
  }
  return x;
}

inline Eigen::MatrixXd mlp_forward(const MlpParams& params,
                                   const Eigen::MatrixXd& input) {
  MlpWorkspace workspace;
  return mlp_forward_cached(params, input, workspace);
}

// Backpropagates d(loss)/d(output) through the cached forward pass,
// accumulating parameter gradients and returning d(loss)/d(input).
inline Eigen::MatrixXd mlp_backward(const MlpParams& params,
                                    const MlpWorkspace& workspace,
                                    const Eigen::MatrixXd& input,
                                    const Eigen::MatrixXd& output_grad,
                                    MlpGrads& grads) {
  const int layers = params.num_layers();
  Eigen::MatrixXd delta = output_grad;
  for (int l = layers - 1; l >= 0; --l) {
    if (l + 1 < layers) {
      delta = delta.cwiseProduct(workspace.pre[l].unaryExpr([](double v) {
        return elu_derivative_from_pre(v);
      }));
    }
    const Eigen::MatrixXd& below = l == 0 ? input : workspace.post[l - 1];
    grads.weights[l] += delta.transpose() * below;
    grads.biases[l] += delta.colwise().sum().transpose();
    delta = delta * params.weights[l];
  }
  return delta;
}

}  // namespace skatemount

#endif  // SKATEMOUNT_MLP_HPP_
