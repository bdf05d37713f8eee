#include "cwae/cwae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cwae/cw_core.hpp"
#include "cwae/data_io.hpp"
#include "cwae/rng.hpp"
#include "cwae/summation.hpp"

namespace cwae::nn {
namespace {

double mse_of(const Matrix& x, const Matrix& recon) {
  CompensatedSum total;
  for (std::size_t i = 0; i < x.rows(); ++i) total += squared_distance(x.row(i), recon.row(i));
  return total.value() / static_cast<double>(x.rows());
}

void check_input(const Sample& x, const MlpParams& params) {
  if (x.dim() != params.input_dim()) {
    throw std::invalid_argument("input dimension " + std::to_string(x.dim()) + " does not match encoder input " +
                                std::to_string(params.input_dim()));
  }
}

void check_batch(const Sample& x, const CostOptions& options) {
  if (options.objective == Objective::CWAE && x.size() < 2) {
    throw std::invalid_argument("cwae_cost: CWAE objective needs a batch of at least 2 points");
  }
}

}  // namespace

std::string_view to_string(Objective o) noexcept { return o == Objective::CWAE ? "cwae" : "plain_ae"; }

Objective parse_objective(std::string_view name) {
  if (name == "cwae" || name == "CWAE") return Objective::CWAE;
  if (name == "plain_ae" || name == "PlainAE" || name == "ae") return Objective::PlainAE;
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

double mse(const Sample& x, const MlpParams& params) {
  check_input(x, params);
  return mse_of(x.points(), decode(params, encode(params, x.points())));
}

CostBreakdown cwae_cost(const Sample& x, const MlpParams& params, const CostOptions& options) {
  check_input(x, params);
  check_batch(x, options);
  const Matrix z = encode(params, x.points());
  const double rec = mse_of(x.points(), decode(params, z));
  if (options.objective == Objective::PlainAE) return CostBreakdown{rec, rec, 0.0, 0.0};
  const double cw =
      cw2_sample_normal(Sample(z), silverman_gamma(x.size()), PhiMode::AsymptoticLargeD).squared_distance;
  const double cw_log = std::log(std::max(cw, options.eps_log));
  return CostBreakdown{rec + options.cw_weight * cw_log, rec, cw_log, cw};
}

CostGradient grad_cwae(const Sample& x, const MlpParams& params, const CostOptions& options) {
  check_input(x, params);
  check_batch(x, options);
  const ForwardTrace trace = forward(params, x.points());
  const Matrix& recon = trace.output();
  const double n = static_cast<double>(x.size());

  Matrix grad_out(recon.rows(), recon.cols());
  for (std::size_t i = 0; i < recon.rows(); ++i) {
    const auto xi = x.point(i);
    const auto ri = recon.row(i);
    auto gi = grad_out.row(i);
    for (std::size_t q = 0; q < gi.size(); ++q) gi[q] = -2.0 / n * (xi[q] - ri[q]);
  }
  const double rec = mse_of(x.points(), recon);

  if (options.objective == Objective::PlainAE) {
    return CostGradient{CostBreakdown{rec, rec, 0.0, 0.0}, backward(params, trace, grad_out)};
  }

  const Matrix& z = trace.latent(params.encoder.size());
  auto cwg = cw2_sample_normal_gradient(Sample(z), silverman_gamma(x.size()));
  const double cw = cwg.report.squared_distance;
  const double cw_log = std::log(std::max(cw, options.eps_log));
  // Below the floor the log term is constant and contributes no gradient.
  const double scale = cw > options.eps_log ? options.cw_weight / cwg.report.pre_clamp : 0.0;
  for (double& g : cwg.gradient.values()) g *= scale;

  return CostGradient{CostBreakdown{rec + options.cw_weight * cw_log, rec, cw_log, cw},
                      backward(params, trace, grad_out, &cwg.gradient)};
}

AdamState init_adam(const MlpParams& params) { return AdamState{params.zeros_like(), params.zeros_like(), 0}; }

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state, const AdamConfig& config) {
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(config.beta1, t);
  const double bc2 = 1.0 - std::pow(config.beta2, t);
  auto p = params.blocks();
  const auto g = grads.blocks();
  auto m = state.m.blocks();
  auto v = state.v.blocks();
  if (g.size() != p.size()) throw std::invalid_argument("adam_step: gradient shape mismatch");
  for (std::size_t b = 0; b < p.size(); ++b) {
    if (g[b].size() != p[b].size()) throw std::invalid_argument("adam_step: gradient shape mismatch");
    for (std::size_t i = 0; i < p[b].size(); ++i) {
      m[b][i] = config.beta1 * m[b][i] + (1.0 - config.beta1) * g[b][i];
      v[b][i] = config.beta2 * v[b][i] + (1.0 - config.beta2) * g[b][i] * g[b][i];
      const double m_hat = m[b][i] / bc1;
      const double v_hat = v[b][i] / bc2;
      p[b][i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
  };
  if (latent_dim == 0) fail("latent_dim", "must be >= 1");
  if (objective == Objective::CWAE && latent_dim < 2) fail("latent_dim", "must be >= 2 for the CWAE objective");
  if (batch_size == 0) fail("batch_size", "must be >= 1");
  if (objective == Objective::CWAE && batch_size < 2) fail("batch_size", "must be >= 2 for the CWAE objective");
  if (!(adam.learning_rate > 0.0)) fail("learning_rate", "must be > 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0)) fail("beta1", "must be in [0, 1)");
  if (!(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) fail("beta2", "must be in [0, 1)");
  if (!(adam.epsilon > 0.0)) fail("epsilon", "must be > 0");
  if (phi_mode != PhiMode::AsymptoticLargeD) fail("phi_mode", "training differentiates the asymptotic regime only");
  if (!(eps_log > 0.0)) fail("eps_log", "must be > 0");
  if (!(grad_clip >= 0.0)) fail("grad_clip", "must be >= 0");
  if (!(cw_weight >= 0.0)) fail("cw_weight", "must be >= 0");
  if (mardia_max_codes == 0) fail("mardia_max_codes", "must be >= 1");
  for (std::size_t h : encoder_hidden) {
    if (h == 0) fail("encoder_hidden", "layer widths must be >= 1");
  }
  for (std::size_t h : decoder_hidden) {
    if (h == 0) fail("decoder_hidden", "layer widths must be >= 1");
  }
}

std::string to_text(const TrainConfig& c) {
  auto list = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  std::ostringstream out;
  out.precision(17);
  out << "latent_dim=" << c.latent_dim << '\n'
      << "encoder_hidden=" << list(c.encoder_hidden) << '\n'
      << "decoder_hidden=" << list(c.decoder_hidden) << '\n'
      << "hidden_activation=" << to_string(c.hidden_activation) << '\n'
      << "output_activation=" << to_string(c.output_activation) << '\n'
      << "batch_size=" << c.batch_size << '\n'
      << "epochs=" << c.epochs << '\n'
      << "learning_rate=" << c.adam.learning_rate << '\n'
      << "beta1=" << c.adam.beta1 << '\n'
      << "beta2=" << c.adam.beta2 << '\n'
      << "epsilon=" << c.adam.epsilon << '\n'
      << "objective=" << to_string(c.objective) << '\n'
      << "seed=" << c.seed << '\n'
      << "phi_mode=" << to_string(c.phi_mode) << '\n'
      << "eps_log=" << c.eps_log << '\n'
      << "grad_clip=" << c.grad_clip << '\n'
      << "cw_weight=" << c.cw_weight << '\n'
      << "mardia_max_codes=" << c.mardia_max_codes << '\n';
  return out.str();
}

TrainRecord evaluate(const MlpParams& params, const Sample& valid, const TrainConfig& config, std::size_t epoch) {
  const double rec = mse(valid, params);
  const std::size_t m = std::min(valid.size(), config.mardia_max_codes);
  Matrix z = encode(params, valid.points());
  if (m < z.rows()) {
    std::vector<std::size_t> head(m);
    std::iota(head.begin(), head.end(), 0);
    z = io::gather_rows(z, head);
  }
  const Sample codes(std::move(z));
  double cw = 0.0;
  if (codes.dim() >= 2) {
    cw = cw2_sample_normal(codes, silverman_gamma(codes.size()), PhiMode::AsymptoticLargeD).squared_distance;
  }
  return TrainRecord{epoch, rec, cw, std::log(std::max(cw, config.eps_log)), mardia(codes)};
}

std::vector<std::size_t> batch_bounds(std::size_t n, std::size_t batch_size, std::size_t min_batch) {
  std::vector<std::size_t> bounds{0};
  for (std::size_t start = batch_size; start < n; start += batch_size) bounds.push_back(start);
  bounds.push_back(n);
  if (bounds.size() > 2 && n - bounds[bounds.size() - 2] < min_batch) bounds.erase(bounds.end() - 2);
  return bounds;
}

TrainResult train(const TrainConfig& config, const Sample& train_data, const Sample& valid_data) {
  config.validate();
  if (config.batch_size > train_data.size()) {
    throw std::invalid_argument("batch_size " + std::to_string(config.batch_size) + " exceeds training set size " +
                                std::to_string(train_data.size()));
  }
  if (valid_data.dim() != train_data.dim()) throw std::invalid_argument("train: validation dimension mismatch");

  Architecture arch{train_data.dim(), config.encoder_hidden, config.latent_dim, config.decoder_hidden,
                    config.hidden_activation, config.output_activation};
  TrainResult result{init_params(arch, config.seed), {}};
  if (config.epochs == 0) {
    result.records.push_back(evaluate(result.params, valid_data, config, 0));
    return result;
  }

  const CostOptions options{config.objective, config.eps_log, config.cw_weight};
  AdamState state = init_adam(result.params);
  const std::size_t n = train_data.size();
  const std::size_t min_batch = config.objective == Objective::CWAE ? 2 : 1;
  const auto bounds = batch_bounds(n, config.batch_size, min_batch);
  std::vector<std::size_t> perm(n);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(perm.begin(), perm.end(), 0);
    CounterRng rng(config.seed, 0xe90c00 + epoch);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
      const std::span<const std::size_t> idx(perm.data() + bounds[b], bounds[b + 1] - bounds[b]);
      const Sample batch(io::gather_rows(train_data.points(), idx));
      auto step = grad_cwae(batch, result.params, options);
      if (!std::isfinite(step.cost.total)) {
        throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch));
      }
      if (config.grad_clip > 0.0) {
        const double norm = global_norm(step.grads);
        if (norm > config.grad_clip) {
          for (auto blk : step.grads.blocks()) {
            for (double& g : blk) g *= config.grad_clip / norm;
          }
        }
      }
      adam_step(result.params, step.grads, state, config.adam);
    }
    result.records.push_back(evaluate(result.params, valid_data, config, epoch));
  }
  return result;
}

}  // namespace cwae::nn
