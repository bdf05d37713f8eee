#include "cwae/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cwae/rng.hpp"

namespace cwae::nn {
namespace {

double activate(Activation a, double v) {
  switch (a) {
    case Activation::ReLU:
      return v > 0.0 ? v : 0.0;
    case Activation::Identity:
      return v;
    case Activation::Sigmoid:
      return 1.0 / (1.0 + std::exp(-v));
  }
  return v;
}

// Derivative expressed through the activation's output y.
double activate_grad(Activation a, double y) {
  switch (a) {
    case Activation::ReLU:
      return y > 0.0 ? 1.0 : 0.0;
    case Activation::Identity:
      return 1.0;
    case Activation::Sigmoid:
      return y * (1.0 - y);
  }
  return 1.0;
}

Matrix apply_layer(const DenseLayer& layer, const Matrix& x, Activation act) {
  Matrix y = matmul_transposed(x, layer.weight);
  for (std::size_t i = 0; i < y.rows(); ++i) {
    auto row = y.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = activate(act, row[j] + layer.bias[j]);
  }
  return y;
}

Activation layer_activation(const MlpParams& p, std::size_t index) {
  const std::size_t ne = p.encoder.size();
  if (index + 1 == ne) return Activation::Identity;
  if (index + 1 == ne + p.decoder.size()) return p.output;
  return p.hidden;
}

const DenseLayer& layer_at(const MlpParams& p, std::size_t index) {
  return index < p.encoder.size() ? p.encoder[index] : p.decoder[index - p.encoder.size()];
}

DenseLayer& layer_at(MlpParams& p, std::size_t index) {
  return index < p.encoder.size() ? p.encoder[index] : p.decoder[index - p.encoder.size()];
}

DenseLayer make_layer(std::size_t in, std::size_t out, double limit, CounterRng& rng) {
  DenseLayer layer{Matrix(out, in), std::vector<double>(out, 0.0)};
  for (double& w : layer.weight.values()) w = rng.uniform(-limit, limit);
  return layer;
}

}  // namespace

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::ReLU:
      return "relu";
    case Activation::Identity:
      return "identity";
    case Activation::Sigmoid:
      return "sigmoid";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::ReLU;
  if (name == "identity") return Activation::Identity;
  if (name == "sigmoid") return Activation::Sigmoid;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

std::size_t MlpParams::input_dim() const { return encoder.empty() ? 0 : encoder.front().in(); }

std::size_t MlpParams::latent_dim() const { return encoder.empty() ? 0 : encoder.back().out(); }

std::size_t MlpParams::parameter_count() const {
  std::size_t total = 0;
  for (const auto& b : blocks()) total += b.size();
  return total;
}

void MlpParams::validate() const {
  if (encoder.empty() || decoder.empty()) throw std::invalid_argument("MlpParams: encoder and decoder need layers");
  std::size_t width = input_dim();
  const std::size_t layers = encoder.size() + decoder.size();
  for (std::size_t i = 0; i < layers; ++i) {
    const auto& l = layer_at(*this, i);
    if (l.in() != width || l.bias.size() != l.out() || l.out() == 0) {
      throw std::invalid_argument("MlpParams: layer " + std::to_string(i) + " shape does not compose");
    }
    width = l.out();
  }
  if (width != input_dim()) throw std::invalid_argument("MlpParams: decoder output must match input dimension");
  for (const auto& b : blocks()) {
    for (double v : b) {
      if (!std::isfinite(v)) throw std::invalid_argument("MlpParams: non-finite parameter");
    }
  }
}

std::vector<std::span<double>> MlpParams::blocks() {
  std::vector<std::span<double>> out;
  for (auto* stack : {&encoder, &decoder}) {
    for (auto& l : *stack) {
      out.emplace_back(l.weight.values());
      out.emplace_back(l.bias);
    }
  }
  return out;
}

std::vector<std::span<const double>> MlpParams::blocks() const {
  std::vector<std::span<const double>> out;
  for (const auto* stack : {&encoder, &decoder}) {
    for (const auto& l : *stack) {
      out.emplace_back(l.weight.values());
      out.emplace_back(l.bias);
    }
  }
  return out;
}

MlpParams MlpParams::zeros_like() const {
  MlpParams z = *this;
  for (auto b : z.blocks()) std::fill(b.begin(), b.end(), 0.0);
  return z;
}

MlpParams init_params(const Architecture& arch, std::uint64_t seed) {
  if (arch.input_dim == 0 || arch.latent_dim == 0) throw std::invalid_argument("init_params: zero dimension");
  CounterRng rng(seed, 0x1417);
  MlpParams p;
  p.hidden = arch.hidden;
  p.output = arch.output;
  auto limit = [&](std::size_t fan_in, bool feeds_relu) {
    return std::sqrt((feeds_relu ? 6.0 : 3.0) / static_cast<double>(fan_in));
  };
  const bool hidden_relu = arch.hidden == Activation::ReLU;
  std::size_t width = arch.input_dim;
  for (std::size_t h : arch.encoder_hidden) {
    p.encoder.push_back(make_layer(width, h, limit(width, hidden_relu), rng));
    width = h;
  }
  p.encoder.push_back(make_layer(width, arch.latent_dim, limit(width, false), rng));
  width = arch.latent_dim;
  for (std::size_t h : arch.decoder_hidden) {
    p.decoder.push_back(make_layer(width, h, limit(width, hidden_relu), rng));
    width = h;
  }
  p.decoder.push_back(make_layer(width, arch.input_dim, limit(width, arch.output == Activation::ReLU), rng));
  return p;
}

ForwardTrace forward(const MlpParams& params, const Matrix& x) {
  if (x.cols() != params.input_dim()) throw std::invalid_argument("forward: input dimension mismatch");
  ForwardTrace trace;
  const std::size_t layers = params.encoder.size() + params.decoder.size();
  trace.inputs.reserve(layers);
  trace.activations.reserve(layers);
  const Matrix* current = &x;
  for (std::size_t i = 0; i < layers; ++i) {
    trace.inputs.push_back(*current);
    trace.activations.push_back(apply_layer(layer_at(params, i), *current, layer_activation(params, i)));
    current = &trace.activations.back();
  }
  return trace;
}

Matrix encode(const MlpParams& params, const Matrix& x) {
  if (x.cols() != params.input_dim()) throw std::invalid_argument("encode: input dimension mismatch");
  Matrix h = x;
  for (std::size_t i = 0; i < params.encoder.size(); ++i) h = apply_layer(params.encoder[i], h, layer_activation(params, i));
  return h;
}

Matrix decode(const MlpParams& params, const Matrix& z) {
  if (z.cols() != params.latent_dim()) throw std::invalid_argument("decode: latent dimension mismatch");
  Matrix h = z;
  const std::size_t ne = params.encoder.size();
  for (std::size_t i = 0; i < params.decoder.size(); ++i) h = apply_layer(params.decoder[i], h, layer_activation(params, ne + i));
  return h;
}

MlpParams backward(const MlpParams& params, const ForwardTrace& trace, const Matrix& grad_output,
                   const Matrix* grad_latent) {
  MlpParams grads = params.zeros_like();
  const std::size_t ne = params.encoder.size();
  const std::size_t layers = ne + params.decoder.size();
  Matrix delta = grad_output;
  for (std::size_t idx = layers; idx-- > 0;) {
    if (idx + 1 == ne && grad_latent != nullptr) {
      auto dv = delta.values();
      const auto gv = grad_latent->values();
      for (std::size_t q = 0; q < dv.size(); ++q) dv[q] += gv[q];
    }
    const Activation act = layer_activation(params, idx);
    const Matrix& y = trace.activations[idx];
    auto dv = delta.values();
    const auto yv = y.values();
    for (std::size_t q = 0; q < dv.size(); ++q) dv[q] *= activate_grad(act, yv[q]);

    DenseLayer& g = layer_at(grads, idx);
    g.weight = transposed_matmul(delta, trace.inputs[idx]);
    for (std::size_t i = 0; i < delta.rows(); ++i) {
      const auto row = delta.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) g.bias[j] += row[j];
    }
    if (idx > 0) delta = matmul(delta, layer_at(params, idx).weight);
  }
  return grads;
}

double global_norm(const MlpParams& grads) {
  double s = 0.0;
  for (const auto& b : grads.blocks()) s += squared_norm(b);
  return std::sqrt(s);
}

}  // namespace cwae::nn
