#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "cwae/matrix.hpp"

namespace cwae::nn {

enum class Activation { ReLU, Identity, Sigmoid };

std::string_view to_string(Activation a) noexcept;
Activation parse_activation(std::string_view name);

struct DenseLayer {
  Matrix weight;             ///< out x in
  std::vector<double> bias;  ///< out

  std::size_t in() const noexcept { return weight.cols(); }
  std::size_t out() const noexcept { return weight.rows(); }
  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Encoder and decoder stacks. Hidden layers use `hidden`; the encoder's last
/// layer (the latent code) is always linear and the decoder's last layer uses
/// `output`. Gradients and Adam moments reuse this type with the same shapes.
struct MlpParams {
  std::vector<DenseLayer> encoder;
  std::vector<DenseLayer> decoder;
  Activation hidden = Activation::ReLU;
  Activation output = Activation::Identity;

  std::size_t input_dim() const;
  std::size_t latent_dim() const;
  std::size_t parameter_count() const;

  /// Throws std::invalid_argument if shapes do not compose or a value is not finite.
  void validate() const;

  /// Every weight and bias block, encoder first, in a fixed order.
  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;

  /// Same shapes and activations, all values zero.
  MlpParams zeros_like() const;

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

struct Architecture {
  std::size_t input_dim = 2;
  std::vector<std::size_t> encoder_hidden;
  std::size_t latent_dim = 2;
  std::vector<std::size_t> decoder_hidden;
  Activation hidden = Activation::ReLU;
  Activation output = Activation::Identity;
};

/// Weights uniform in +-sqrt(6 / fan_in) for layers feeding a ReLU and
/// +-sqrt(3 / fan_in) otherwise; biases zero.
MlpParams init_params(const Architecture& arch, std::uint64_t seed);

/// Per-layer values kept for backpropagation.
struct ForwardTrace {
  std::vector<Matrix> inputs;       ///< input of every layer, encoder then decoder
  std::vector<Matrix> activations;  ///< output of every layer
  const Matrix& latent(std::size_t encoder_layers) const { return activations[encoder_layers - 1]; }
  const Matrix& output() const { return activations.back(); }
};

ForwardTrace forward(const MlpParams& params, const Matrix& x);
Matrix encode(const MlpParams& params, const Matrix& x);
Matrix decode(const MlpParams& params, const Matrix& z);

/// Backpropagates d loss / d output of the decoder, plus an optional extra
/// gradient injected at the latent code, into parameter gradients.
MlpParams backward(const MlpParams& params, const ForwardTrace& trace, const Matrix& grad_output,
                   const Matrix* grad_latent = nullptr);

double global_norm(const MlpParams& grads);

}  // namespace cwae::nn
