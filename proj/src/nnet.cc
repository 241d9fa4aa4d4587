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

#include "vaelime/nnet.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "vaelime/errors.h"

namespace vaelime {

namespace {

double Activate(Activation a, double v) {
  return a == Activation::kTanh ? std::tanh(v) : v;
}

// Derivative expressed through the post-activation value.
double ActivationSlope(Activation a, double post) {
  return a == Activation::kTanh ? 1.0 - post * post : 1.0;
}

template <typename Fn>
void ForEachParameter(DenseNet& net, Fn&& fn) {
  for (auto& layer : net.mutable_layers()) {
    for (double& w : layer.weights.data()) fn(w);
    for (double& b : layer.bias) fn(b);
  }
}

template <typename Fn>
void ForEachGradient(const Gradients& g, Fn&& fn) {
  for (const auto& layer : g.layers) {
    for (double w : layer.weights.data()) fn(w);
    for (double b : layer.bias) fn(b);
  }
}

}  // namespace

DenseNet::DenseNet(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.bias.size() != l.out_dim()) {
      throw DimensionMismatch("layer " + std::to_string(i) +
                              ": bias length does not match weight rows");
    }
    if (i > 0 && layers_[i - 1].out_dim() != l.in_dim()) {
      throw DimensionMismatch("layer " + std::to_string(i) + " expects " +
                              std::to_string(l.in_dim()) + " inputs but " +
                              "previous layer emits " +
                              std::to_string(layers_[i - 1].out_dim()));
    }
  }
}

DenseNet DenseNet::Create(const std::vector<std::size_t>& widths,
                          std::uint64_t seed) {
  if (widths.size() < 2) throw Error("network needs at least two widths");
  std::mt19937_64 rng(seed);
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const std::size_t fan_in = widths[i];
    const std::size_t fan_out = widths[i + 1];
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> uniform(-a, a);
    DenseLayer layer;
    layer.weights = Matrix(fan_out, fan_in);
    for (double& w : layer.weights.data()) w = uniform(rng);
    layer.bias.assign(fan_out, 0.0);
    layer.activation =
        i + 2 == widths.size() ? Activation::kIdentity : Activation::kTanh;
    layers.push_back(std::move(layer));
  }
  return DenseNet(std::move(layers));
}

std::size_t DenseNet::input_dim() const {
  return layers_.empty() ? 0 : layers_.front().in_dim();
}

std::size_t DenseNet::output_dim() const {
  return layers_.empty() ? 0 : layers_.back().out_dim();
}

std::size_t DenseNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.data().size() + l.bias.size();
  return n;
}

ForwardResult Forward(const DenseNet& net, std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw DimensionMismatch("forward: input length " +
                            std::to_string(x.size()) + ", network expects " +
                            std::to_string(net.input_dim()));
  }
  ForwardResult result;
  auto& cache = result.cache;
  cache.inputs.reserve(net.layers().size());
  cache.outputs.reserve(net.layers().size());
  Vector current(x.begin(), x.end());
  for (const auto& layer : net.layers()) {
    Vector next = MatVec(layer.weights, current);
    for (std::size_t o = 0; o < next.size(); ++o) {
      next[o] = Activate(layer.activation, next[o] + layer.bias[o]);
    }
    cache.inputs.push_back(std::move(current));
    cache.outputs.push_back(next);
    current = std::move(next);
  }
  result.output = std::move(current);
  return result;
}

Vector Evaluate(const DenseNet& net, std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw DimensionMismatch("evaluate: input length " +
                            std::to_string(x.size()) + ", network expects " +
                            std::to_string(net.input_dim()));
  }
  Vector current(x.begin(), x.end());
  for (const auto& layer : net.layers()) {
    Vector next = MatVec(layer.weights, current);
    for (std::size_t o = 0; o < next.size(); ++o) {
      next[o] = Activate(layer.activation, next[o] + layer.bias[o]);
    }
    current = std::move(next);
  }
  return current;
}

Gradients Gradients::ZerosLike(const DenseNet& net) {
  Gradients g;
  for (const auto& l : net.layers()) {
    g.layers.push_back({Matrix(l.out_dim(), l.in_dim()),
                        Vector(l.out_dim(), 0.0)});
  }
  g.input.assign(net.input_dim(), 0.0);
  return g;
}

void Gradients::Add(const Gradients& other) {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto dst = layers[i].weights.data();
    auto src = other.layers[i].weights.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    for (std::size_t k = 0; k < layers[i].bias.size(); ++k) {
      layers[i].bias[k] += other.layers[i].bias[k];
    }
  }
  for (std::size_t k = 0; k < input.size() && k < other.input.size(); ++k) {
    input[k] += other.input[k];
  }
}

void Gradients::Scale(double factor) {
  for (auto& l : layers) {
    for (double& w : l.weights.data()) w *= factor;
    for (double& b : l.bias) b *= factor;
  }
  for (double& v : input) v *= factor;
}

Gradients Backward(const DenseNet& net, const ForwardCache& cache,
                   std::span<const double> output_gradient) {
  const auto& layers = net.layers();
  if (cache.inputs.size() != layers.size() ||
      cache.outputs.size() != layers.size()) {
    throw DimensionMismatch("backward: cache does not match network depth");
  }
  if (output_gradient.size() != net.output_dim()) {
    throw DimensionMismatch("backward: output gradient length " +
                            std::to_string(output_gradient.size()) +
                            ", network emits " +
                            std::to_string(net.output_dim()));
  }
  Gradients g;
  g.layers.resize(layers.size());
  Vector upstream(output_gradient.begin(), output_gradient.end());
  for (std::size_t li = layers.size(); li-- > 0;) {
    const auto& layer = layers[li];
    const auto& in = cache.inputs[li];
    const auto& out = cache.outputs[li];
    Vector delta(layer.out_dim());
    for (std::size_t o = 0; o < delta.size(); ++o) {
      delta[o] = upstream[o] * ActivationSlope(layer.activation, out[o]);
    }
    auto& lg = g.layers[li];
    lg.weights = Matrix(layer.out_dim(), layer.in_dim());
    for (std::size_t o = 0; o < layer.out_dim(); ++o) {
      auto row = lg.weights.row(o);
      for (std::size_t i = 0; i < layer.in_dim(); ++i) row[i] = delta[o] * in[i];
    }
    lg.bias = delta;
    Vector down(layer.in_dim(), 0.0);
    for (std::size_t o = 0; o < layer.out_dim(); ++o) {
      const auto w = layer.weights.row(o);
      for (std::size_t i = 0; i < layer.in_dim(); ++i) down[i] += w[i] * delta[o];
    }
    upstream = std::move(down);
  }
  g.input = std::move(upstream);
  return g;
}

OptimizerState OptimizerState::For(const DenseNet& net,
                                   const AdamConfig& config) {
  return {config, Gradients::ZerosLike(net), Gradients::ZerosLike(net), 0};
}

void OptimizerStep(DenseNet& net, const Gradients& grads,
                   OptimizerState& state) {
  const auto& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.decay1, t);
  const double correction2 = 1.0 - std::pow(c.decay2, t);
  auto update = [&](double& param, double grad, double& m, double& v) {
    m = c.decay1 * m + (1.0 - c.decay1) * grad;
    v = c.decay2 * v + (1.0 - c.decay2) * grad * grad;
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    param -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  };
  auto& layers = net.mutable_layers();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    auto params = layers[li].weights.data();
    auto g = grads.layers[li].weights.data();
    auto m = state.first_moment.layers[li].weights.data();
    auto v = state.second_moment.layers[li].weights.data();
    for (std::size_t k = 0; k < params.size(); ++k) {
      update(params[k], g[k], m[k], v[k]);
    }
    auto& bias = layers[li].bias;
    for (std::size_t k = 0; k < bias.size(); ++k) {
      update(bias[k], grads.layers[li].bias[k],
             state.first_moment.layers[li].bias[k],
             state.second_moment.layers[li].bias[k]);
    }
  }
}

double GradientCheck(const DenseNet& net, std::span<const double> input,
                     const OutputLoss& loss, double h,
                     const BackwardFn& backward) {
  const auto fwd = Forward(net, input);
  const Vector upstream = loss(fwd.output).second;
  const Gradients analytic = backward(net, fwd.cache, upstream);

  Vector analytic_flat;
  ForEachGradient(analytic, [&](double g) { analytic_flat.push_back(g); });

  DenseNet probe = net;
  Vector numeric_flat;
  numeric_flat.reserve(analytic_flat.size());
  ForEachParameter(probe, [&](double& p) {
    const double saved = p;
    p = saved + h;
    const double plus = loss(Evaluate(probe, input)).first;
    p = saved - h;
    const double minus = loss(Evaluate(probe, input)).first;
    p = saved;
    numeric_flat.push_back((plus - minus) / (2.0 * h));
  });

  double worst = 0.0;
  for (std::size_t k = 0; k < analytic_flat.size(); ++k) {
    const double a = analytic_flat[k];
    const double n = numeric_flat[k];
    const double rel =
        std::abs(a - n) / std::max(1e-8, std::abs(a) + std::abs(n));
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace vaelime
