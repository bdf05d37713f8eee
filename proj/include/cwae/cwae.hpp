#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cwae/mlp.hpp"
#include "cwae/normality.hpp"
#include "cwae/sample.hpp"
#include "cwae/special_fn.hpp"

namespace cwae::nn {

enum class Objective { CWAE, PlainAE };

std::string_view to_string(Objective o) noexcept;
Objective parse_objective(std::string_view name);

struct CostOptions {
  Objective objective = Objective::CWAE;
  double eps_log = 1e-12;  ///< floor inside the logarithm
  double cw_weight = 1.0;  ///< multiplier of the log term; the model uses 1
};

struct CostBreakdown {
  double total;
  double mse;
  double cw_log;      ///< log(max(cw, eps_log)); 0 for PlainAE
  double cw_pre_log;  ///< squared CW distance of the codes to N(0, I); 0 for PlainAE
};

/// Mean over points of the squared reconstruction norm |x - D(E x)|^2.
double mse(const Sample& x, const MlpParams& params);

/// log d_cw^2(E X, N(0, I)) + MSE, with the distance taken in the asymptotic
/// phi regime and gamma = silverman_gamma(n) of this batch. Needs n >= 2 for CWAE.
CostBreakdown cwae_cost(const Sample& x, const MlpParams& params, const CostOptions& options = {});

struct CostGradient {
  CostBreakdown cost;
  MlpParams grads;
};

/// Exact gradient of cwae_cost with respect to every weight and bias.
CostGradient grad_cwae(const Sample& x, const MlpParams& params, const CostOptions& options = {});

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  MlpParams m;
  MlpParams v;
  std::uint64_t step = 0;
};

AdamState init_adam(const MlpParams& params);

/// One bias-corrected Adam update in place.
void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state, const AdamConfig& config);

struct TrainConfig {
  std::size_t latent_dim = 2;
  std::vector<std::size_t> encoder_hidden{32, 32};
  std::vector<std::size_t> decoder_hidden{32, 32};
  Activation hidden_activation = Activation::ReLU;
  Activation output_activation = Activation::Identity;
  std::size_t batch_size = 64;
  std::size_t epochs = 10;
  AdamConfig adam;
  Objective objective = Objective::CWAE;
  std::uint64_t seed = 0;
  PhiMode phi_mode = PhiMode::AsymptoticLargeD;
  double eps_log = 1e-12;
  double grad_clip = 0.0;  ///< global-norm clipping threshold; 0 disables it
  double cw_weight = 1.0;
  std::size_t mardia_max_codes = 10000;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Flat key=value text, one field per line, in a fixed order.
std::string to_text(const TrainConfig& config);

struct TrainRecord {
  std::size_t epoch;
  double reconstruction_error;
  double cw_pre_log;
  double cw_post_log;
  MardiaStats mardia;
};

struct TrainResult {
  MlpParams params;
  std::vector<TrainRecord> records;
};

/// Validation metrics for the current parameters.
TrainRecord evaluate(const MlpParams& params, const Sample& valid, const TrainConfig& config,
                     std::size_t epoch);

/// Minibatch Adam on cwae_cost (or MSE alone for PlainAE). One record per
/// epoch, measured on `valid`; zero epochs yields a single baseline record.
TrainResult train(const TrainConfig& config, const Sample& train_data, const Sample& valid_data);

/// Batch boundaries for one epoch of n points: consecutive chunks of
/// batch_size with the remainder as a final partial batch. A remainder of a
/// single point is folded into the previous batch when min_batch is 2.
std::vector<std::size_t> batch_bounds(std::size_t n, std::size_t batch_size, std::size_t min_batch);

}  // namespace cwae::nn
