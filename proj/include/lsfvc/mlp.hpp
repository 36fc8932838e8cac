// Copyright 2026  The lsfvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Fully connected feedforward network (tanh hidden layers, linear output)
// trained by full-batch gradient descent with momentum.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lsfvc/error.hpp"
#include "lsfvc/random.hpp"
#include "lsfvc/text_io.hpp"

namespace lsfvc {

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // row-major, outputs x inputs
  std::vector<double> biases;   // outputs

  double& weight(std::size_t out, std::size_t in) { return weights[out * inputs + in]; }
  double weight(std::size_t out, std::size_t in) const { return weights[out * inputs + in]; }

  static DenseLayer Zero(std::size_t inputs, std::size_t outputs) {
    return {inputs, outputs, std::vector<double>(inputs * outputs, 0.0),
            std::vector<double>(outputs, 0.0)};
  }

  bool operator==(const DenseLayer&) const = default;
};

struct MlpModel {
  std::vector<std::size_t> layer_sizes;
  std::vector<DenseLayer> layers;

  std::size_t input_size() const { return layer_sizes.front(); }
  std::size_t output_size() const { return layer_sizes.back(); }

  bool operator==(const MlpModel&) const = default;
};

/// Same shape as the model's layers; holds dLoss/dweight and dLoss/dbias.
struct MlpGradients {
  std::vector<DenseLayer> layers;
};

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  int max_epochs = 5000;
  double convergence_delta = 1e-8;
  std::uint64_t seed = 42;
};

struct TrainReport {
  int epochs_run = 0;
  double final_mse = 0.0;
  std::vector<double> mse_history;  // objective at the start of each epoch

  bool operator==(const TrainReport&) const = default;
};

using TrainingPair = std::pair<std::vector<double>, std::vector<double>>;

namespace detail {

inline void CheckSizes(std::span<const std::size_t> sizes) {
  if (sizes.size() < 2)
    throw Error(ErrorCode::kInvalidArgument, "a network needs at least an input and an output layer");
  for (std::size_t s : sizes)
    if (s == 0) throw Error(ErrorCode::kInvalidArgument, "layer sizes must be positive");
}

inline void CheckLength(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw Error(ErrorCode::kDimensionMismatch, std::string(what) + " has length " +
                                                   std::to_string(got) + ", expected " +
                                                   std::to_string(want));
}

/// Per-layer activations of one forward pass; activations[0] is the input.
struct ForwardTrace {
  std::vector<std::vector<double>> activations;
};

inline void ForwardInto(const MlpModel& model, std::span<const double> input, ForwardTrace& trace) {
  const std::size_t depth = model.layers.size();
  trace.activations.resize(depth + 1);
  trace.activations[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < depth; ++l) {
    const DenseLayer& layer = model.layers[l];
    const std::vector<double>& x = trace.activations[l];
    std::vector<double>& y = trace.activations[l + 1];
    y.resize(layer.outputs);
    const bool hidden = l + 1 < depth;
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* w = layer.weights.data() + o * layer.inputs;
      double acc = layer.biases[o];
      for (std::size_t i = 0; i < layer.inputs; ++i) acc += w[i] * x[i];
      y[o] = hidden ? std::tanh(acc) : acc;
    }
  }
}

/// Adds the gradient of sum (y - t)^2 for one sample, scaled by `scale`, and
/// returns the sample loss. `trace` must hold the forward pass for `target`'s input.
inline double Backpropagate(const MlpModel& model, const ForwardTrace& trace,
                            std::span<const double> target, double scale, MlpGradients& grads,
                            std::vector<double>& delta, std::vector<double>& next_delta) {
  const std::size_t depth = model.layers.size();
  const std::vector<double>& y = trace.activations[depth];
  double loss = 0.0;
  delta.resize(y.size());
  for (std::size_t o = 0; o < y.size(); ++o) {
    const double diff = y[o] - target[o];
    loss += diff * diff;
    delta[o] = 2.0 * diff;
  }
  for (std::size_t l = depth; l-- > 0;) {
    const DenseLayer& layer = model.layers[l];
    DenseLayer& g = grads.layers[l];
    const std::vector<double>& x = trace.activations[l];
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double d = scale * delta[o];
      g.biases[o] += d;
      double* gw = g.weights.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) gw[i] += d * x[i];
    }
    if (l == 0) break;
    next_delta.assign(layer.inputs, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* w = layer.weights.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) next_delta[i] += w[i] * delta[o];
    }
    for (std::size_t i = 0; i < layer.inputs; ++i) next_delta[i] *= 1.0 - x[i] * x[i];
    std::swap(delta, next_delta);
  }
  return loss;
}

inline MlpGradients ZeroGradients(const MlpModel& model) {
  MlpGradients g;
  for (const DenseLayer& layer : model.layers)
    g.layers.push_back(DenseLayer::Zero(layer.inputs, layer.outputs));
  return g;
}

}  // namespace detail

/// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
inline MlpModel InitMlp(std::span<const std::size_t> layer_sizes, std::uint64_t seed) {
  detail::CheckSizes(layer_sizes);
  MlpModel model;
  model.layer_sizes.assign(layer_sizes.begin(), layer_sizes.end());
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    DenseLayer layer = DenseLayer::Zero(layer_sizes[l], layer_sizes[l + 1]);
    const double bound = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    for (double& w : layer.weights) w = rng.Uniform(-bound, bound);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

/// Parses "24-50-24" style layer lists.
inline std::vector<std::size_t> ParseArchitecture(std::string_view arch) {
  std::vector<std::size_t> sizes;
  for (std::string_view part : text::Split(arch, '-')) {
    try {
      sizes.push_back(text::ParseInt<std::size_t>(part));
    } catch (const Error&) {
      throw Error(ErrorCode::kInvalidArgument, "bad architecture '" + std::string(arch) + "'");
    }
  }
  detail::CheckSizes(sizes);
  return sizes;
}

inline std::string FormatArchitecture(std::span<const std::size_t> sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(sizes[i]);
  }
  return out;
}

inline std::vector<double> Forward(const MlpModel& model, std::span<const double> input) {
  detail::CheckLength(input.size(), model.input_size(), "input");
  detail::ForwardTrace trace;
  detail::ForwardInto(model, input, trace);
  return std::move(trace.activations.back());
}

/// Exact gradients of the single-sample loss sum_i (y_i - t_i)^2.
inline MlpGradients ComputeGradients(const MlpModel& model, std::span<const double> input,
                                     std::span<const double> target) {
  detail::CheckLength(input.size(), model.input_size(), "input");
  detail::CheckLength(target.size(), model.output_size(), "target");
  detail::ForwardTrace trace;
  detail::ForwardInto(model, input, trace);
  MlpGradients grads = detail::ZeroGradients(model);
  std::vector<double> delta, next_delta;
  detail::Backpropagate(model, trace, target, 1.0, grads, delta, next_delta);
  return grads;
}

/// Mean over pairs of the per-sample squared error sum.
inline double MeanSquaredError(const MlpModel& model, std::span<const TrainingPair> pairs) {
  detail::ForwardTrace trace;
  double total = 0.0;
  for (const auto& [input, target] : pairs) {
    detail::ForwardInto(model, input, trace);
    const std::vector<double>& y = trace.activations.back();
    for (std::size_t o = 0; o < y.size(); ++o) total += (y[o] - target[o]) * (y[o] - target[o]);
  }
  return total / static_cast<double>(pairs.size());
}

struct TrainResult {
  MlpModel model;
  TrainReport report;
};

/// Full-batch gradient descent with momentum on MeanSquaredError:
///   v <- momentum * v - learning_rate * grad;  theta <- theta + v
/// Stops after max_epochs or once successive epoch losses differ by less than
/// convergence_delta.
inline TrainResult Train(MlpModel model, std::span<const TrainingPair> pairs,
                         const TrainConfig& config) {
  if (pairs.empty()) throw Error(ErrorCode::kInvalidArgument, "no training pairs");
  if (!(config.learning_rate > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  if (!(config.momentum >= 0.0 && config.momentum < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "momentum must lie in [0, 1)");
  if (config.max_epochs < 1) throw Error(ErrorCode::kInvalidArgument, "max_epochs must be >= 1");
  for (const auto& [input, target] : pairs) {
    detail::CheckLength(input.size(), model.input_size(), "training input");
    detail::CheckLength(target.size(), model.output_size(), "training target");
  }

  TrainReport report;
  MlpGradients velocity = detail::ZeroGradients(model);
  MlpGradients grads = detail::ZeroGradients(model);
  detail::ForwardTrace trace;
  std::vector<double> delta, next_delta;
  const double scale = 1.0 / static_cast<double>(pairs.size());

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    for (DenseLayer& g : grads.layers) {
      std::fill(g.weights.begin(), g.weights.end(), 0.0);
      std::fill(g.biases.begin(), g.biases.end(), 0.0);
    }
    double loss = 0.0;
    for (const auto& [input, target] : pairs) {
      detail::ForwardInto(model, input, trace);
      loss += detail::Backpropagate(model, trace, target, scale, grads, delta, next_delta);
    }
    loss *= scale;
    if (!std::isfinite(loss))
      throw Error(ErrorCode::kDivergence, "non-finite loss at epoch " + std::to_string(epoch));
    report.mse_history.push_back(loss);
    report.epochs_run = epoch;

    for (std::size_t l = 0; l < model.layers.size(); ++l) {
      DenseLayer& layer = model.layers[l];
      DenseLayer& v = velocity.layers[l];
      const DenseLayer& g = grads.layers[l];
      for (std::size_t k = 0; k < layer.weights.size(); ++k) {
        v.weights[k] = config.momentum * v.weights[k] - config.learning_rate * g.weights[k];
        layer.weights[k] += v.weights[k];
      }
      for (std::size_t k = 0; k < layer.biases.size(); ++k) {
        v.biases[k] = config.momentum * v.biases[k] - config.learning_rate * g.biases[k];
        layer.biases[k] += v.biases[k];
      }
    }

    const std::size_t h = report.mse_history.size();
    if (h >= 2 && std::abs(report.mse_history[h - 1] - report.mse_history[h - 2]) <
                      config.convergence_delta)
      break;
  }
  report.final_mse = MeanSquaredError(model, pairs);
  if (!std::isfinite(report.final_mse))
    throw Error(ErrorCode::kDivergence, "non-finite loss after the final update");
  return {std::move(model), std::move(report)};
}

// Model file:
//   VCMLP 1
//   <layer sizes>
//   per layer, per output unit: <bias> <weights from each input>
inline std::string FormatModel(const MlpModel& model) {
  std::string out = "VCMLP 1\n";
  for (std::size_t i = 0; i < model.layer_sizes.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(model.layer_sizes[i]);
  }
  out += '\n';
  for (const DenseLayer& layer : model.layers) {
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      out += text::FormatDouble(layer.biases[o]);
      for (std::size_t i = 0; i < layer.inputs; ++i) {
        out += ' ';
        out += text::FormatDouble(layer.weight(o, i));
      }
      out += '\n';
    }
  }
  return out;
}

inline MlpModel ParseModel(const std::vector<std::string>& lines) {
  std::size_t count = lines.size();
  if (count > 0 && lines.back().empty()) --count;  // one trailing newline
  if (count < 2) throw Error(ErrorCode::kParseError, "model file needs a header and layer sizes");

  const auto header = text::Tokens(lines[0]);
  if (header.size() != 2 || header[0] != "VCMLP")
    throw Error(ErrorCode::kParseError, "missing VCMLP header");
  if (header[1] != "1")
    throw Error(ErrorCode::kVersionMismatch,
                "model version " + std::string(header[1]) + ", this build reads 1");

  std::vector<std::size_t> sizes;
  for (std::string_view tok : text::Tokens(lines[1])) sizes.push_back(text::ParseInt<std::size_t>(tok));
  detail::CheckSizes(sizes);

  MlpModel model;
  model.layer_sizes = sizes;
  std::size_t row = 2;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    DenseLayer layer = DenseLayer::Zero(sizes[l], sizes[l + 1]);
    for (std::size_t o = 0; o < layer.outputs; ++o, ++row) {
      if (row >= count)
        throw Error(ErrorCode::kDimensionMismatch,
                    "file ends before layer " + std::to_string(l) + " unit " + std::to_string(o));
      const auto toks = text::Tokens(lines[row]);
      if (toks.size() != layer.inputs + 1)
        throw Error(ErrorCode::kDimensionMismatch,
                    "line " + std::to_string(row + 1) + " has " + std::to_string(toks.size()) +
                        " values, expected " + std::to_string(layer.inputs + 1));
      layer.biases[o] = text::ParseDouble(toks[0]);
      for (std::size_t i = 0; i < layer.inputs; ++i) layer.weight(o, i) = text::ParseDouble(toks[i + 1]);
    }
    model.layers.push_back(std::move(layer));
  }
  if (row != count)
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(count - row) + " rows beyond the declared layer sizes");
  for (const DenseLayer& layer : model.layers) {
    for (double w : layer.weights)
      if (!std::isfinite(w)) throw Error(ErrorCode::kParseError, "non-finite weight");
    for (double b : layer.biases)
      if (!std::isfinite(b)) throw Error(ErrorCode::kParseError, "non-finite bias");
  }
  return model;
}

inline void SaveModel(const MlpModel& model, const std::filesystem::path& path) {
  text::WriteFile(path, FormatModel(model));
}

inline MlpModel LoadModel(const std::filesystem::path& path) {
  return ParseModel(text::ReadLines(path));
}

}  // namespace lsfvc
