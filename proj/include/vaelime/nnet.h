/*
 * Copyright 2026 The vaelime Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VAELIME_NNET_H_
#define VAELIME_NNET_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "vaelime/linalg.h"

namespace vaelime {

enum class Activation { kTanh, kIdentity };

struct DenseLayer {
  Matrix weights;  // out x in
  Vector bias;     // out
  Activation activation = Activation::kIdentity;

  std::size_t in_dim() const { return weights.cols(); }
  std::size_t out_dim() const { return weights.rows(); }
  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Fully connected feed-forward network.
class DenseNet {
 public:
  DenseNet() = default;
  // Validates that layer shapes chain.
  explicit DenseNet(std::vector<DenseLayer> layers);

  // Glorot-uniform weights, zero biases. `widths` lists every layer width
  // including input and output; hidden layers use tanh and the output layer
  // uses identity.
  static DenseNet Create(const std::vector<std::size_t>& widths,
                         std::uint64_t seed);

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t parameter_count() const;

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }

  friend bool operator==(const DenseNet&, const DenseNet&) = default;

 private:
  std::vector<DenseLayer> layers_;
};

// Inputs and post-activation outputs of every layer.
struct ForwardCache {
  std::vector<Vector> inputs;
  std::vector<Vector> outputs;
};

struct ForwardResult {
  Vector output;
  ForwardCache cache;
};

ForwardResult Forward(const DenseNet& net, std::span<const double> x);

// Forward pass without retaining the cache.
Vector Evaluate(const DenseNet& net, std::span<const double> x);

struct LayerGradients {
  Matrix weights;
  Vector bias;
};

struct Gradients {
  std::vector<LayerGradients> layers;
  Vector input;

  // Zero-filled gradients shaped like `net`.
  static Gradients ZerosLike(const DenseNet& net);
  void Add(const Gradients& other);
  void Scale(double factor);
};

// Backpropagates dLoss/dOutput through the cached forward pass.
Gradients Backward(const DenseNet& net, const ForwardCache& cache,
                   std::span<const double> output_gradient);

struct AdamConfig {
  double learning_rate = 1e-3;
  double decay1 = 0.9;
  double decay2 = 0.999;
  double epsilon = 1e-8;
};

// First and second moment accumulators for one network.
struct OptimizerState {
  AdamConfig config;
  Gradients first_moment;
  Gradients second_moment;
  std::uint64_t step = 0;

  static OptimizerState For(const DenseNet& net, const AdamConfig& config);
};

// One bias-corrected adaptive-moment update of `net` in place.
void OptimizerStep(DenseNet& net, const Gradients& grads,
                   OptimizerState& state);

// Scalar loss of the network output: returns the loss value and
// dLoss/dOutput.
using OutputLoss =
    std::function<std::pair<double, Vector>(std::span<const double> output)>;

using BackwardFn = std::function<Gradients(
    const DenseNet&, const ForwardCache&, std::span<const double>)>;

// Largest relative discrepancy |a - n| / max(1e-8, |a| + |n|) between the
// analytic parameter gradients and central finite differences with step h.
double GradientCheck(const DenseNet& net, std::span<const double> input,
                     const OutputLoss& loss, double h = 1e-5,
                     const BackwardFn& backward = Backward);

}  // namespace vaelime

#endif  // VAELIME_NNET_H_
