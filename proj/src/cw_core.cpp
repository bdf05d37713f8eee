#include "cwae/cw_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cwae/parallel.hpp"
#include "cwae/summation.hpp"

namespace cwae {
namespace {

struct PhiEval {
  int dim;
  PhiMode mode;
  double operator()(double s) const {
    switch (mode) {
      case PhiMode::ExactSeries:
        return phi_exact(dim, s);
      case PhiMode::AsymptoticLargeD:
        return 1.0 / std::sqrt(1.0 + 4.0 * s / (2.0 * dim - 3.0));
      case PhiMode::BesselD2:
        return phi_bessel_d2(s);
    }
    return 0.0;
  }
};

int checked_dim(std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("cw distance: dimension must be >= 2");
  return static_cast<int>(dim);
}

// sum_i sum_j phi(scale * |a_i - b_j|^2) in row-major order. Each row is summed
// with compensation into its own slot, then the slots are combined in order.
double pair_sum(const Matrix& a, const Matrix& b, double scale, const PhiEval& phi_fn) {
  std::vector<double> rows(a.rows());
  parallel_for(a.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      CompensatedSum acc;
      const auto ai = a.row(i);
      for (std::size_t j = 0; j < b.rows(); ++j) acc += phi_fn(scale * squared_distance(ai, b.row(j)));
      rows[i] = acc.value();
    }
  });
  CompensatedSum total;
  for (double r : rows) total += r;
  return total.value();
}

// sum_i phi(scale * |a_i|^2)
double norm_sum(const Matrix& a, double scale, const PhiEval& phi_fn) {
  CompensatedSum total;
  for (std::size_t i = 0; i < a.rows(); ++i) total += phi_fn(scale * squared_norm(a.row(i)));
  return total.value();
}

// Canonical order for the symmetric distance: smaller sample first, ties
// broken lexicographically on the raw values.
bool should_swap(const Sample& x, const Sample& y) {
  if (x.size() != y.size()) return y.size() < x.size();
  const auto xv = x.points().values();
  const auto yv = y.points().values();
  return std::lexicographical_compare(yv.begin(), yv.end(), xv.begin(), xv.end());
}

}  // namespace

Bandwidth::Bandwidth(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::domain_error("Bandwidth: gamma must be positive and finite");
  }
}

Bandwidth silverman_gamma(std::size_t n) {
  if (n == 0) throw std::domain_error("silverman_gamma: n must be >= 1");
  return Bandwidth(std::pow(4.0 / (3.0 * static_cast<double>(n)), 0.4));
}

CwReport cw2_sample_sample(const Sample& x, const Sample& y, std::optional<Bandwidth> gamma,
                           std::optional<PhiMode> mode) {
  if (x.dim() != y.dim()) {
    throw std::invalid_argument("cw2_sample_sample: dimension mismatch (" + std::to_string(x.dim()) +
                                " vs " + std::to_string(y.dim()) + ")");
  }
  const int dim = checked_dim(x.dim());
  const Bandwidth g = gamma.value_or(silverman_gamma(std::min(x.size(), y.size())));
  const PhiEval phi_fn{dim, resolve_phi_mode(dim, mode)};

  const bool swap = should_swap(x, y);
  const Sample& a = swap ? y : x;
  const Sample& b = swap ? x : y;
  const double scale = 1.0 / (4.0 * g.value());
  const double saa = pair_sum(a.points(), a.points(), scale, phi_fn);
  const double sbb = pair_sum(b.points(), b.points(), scale, phi_fn);
  const double sab = pair_sum(a.points(), b.points(), scale, phi_fn);

  const double n = static_cast<double>(a.size());
  const double k = static_cast<double>(b.size());
  const double root = std::sqrt(std::numbers::pi * g.value());
  double value = 0.0;
  if (a.size() == b.size()) {
    value = (saa + sbb - 2.0 * sab) / (2.0 * n * n * root);
  } else {
    value = (saa / (n * n) + sbb / (k * k) - 2.0 * sab / (n * k)) / (2.0 * root);
  }
  return CwReport{std::max(0.0, value), value, g, phi_fn.mode, x.size(), y.size(), x.dim()};
}

CwReport cw2_sample_normal(const Sample& x, std::optional<Bandwidth> gamma,
                           std::optional<PhiMode> mode) {
  const int dim = checked_dim(x.dim());
  const Bandwidth g = gamma.value_or(silverman_gamma(x.size()));
  const PhiEval phi_fn{dim, resolve_phi_mode(dim, mode)};
  const double gv = g.value();
  const double n = static_cast<double>(x.size());

  const double self = pair_sum(x.points(), x.points(), 1.0 / (4.0 * gv), phi_fn);
  const double cross = norm_sum(x.points(), 1.0 / (2.0 + 4.0 * gv), phi_fn);
  const double bracket =
      self / std::sqrt(gv) + n * n / std::sqrt(1.0 + gv) - 2.0 * n / std::sqrt(gv + 0.5) * cross;
  const double value = bracket / (2.0 * n * n * std::sqrt(std::numbers::pi));
  return CwReport{std::max(0.0, value), value, g, phi_fn.mode, x.size(), 0, x.dim()};
}

CwNormalGradient cw2_sample_normal_gradient(const Sample& x, Bandwidth gamma) {
  CwNormalGradient out{cw2_sample_normal(x, gamma, PhiMode::AsymptoticLargeD),
                       Matrix(x.size(), x.dim())};
  const int dim = static_cast<int>(x.dim());
  const double gv = gamma.value();
  const double n = static_cast<double>(x.size());
  const double c = 1.0 / (2.0 * n * n * std::sqrt(std::numbers::pi));
  const double self_coef = c / (gv * std::sqrt(gv));
  const double cross_coef = c * 2.0 * n / std::sqrt(gv + 0.5) * 2.0 / (2.0 + 4.0 * gv);
  const Matrix& pts = x.points();
  const std::size_t d = x.dim();

  parallel_for(x.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> acc(d);
    for (std::size_t i = begin; i < end; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const auto xi = pts.row(i);
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (j == i) continue;
        const auto xj = pts.row(j);
        const double w = phi_asymptotic_derivative(dim, squared_distance(xi, xj) / (4.0 * gv));
        for (std::size_t q = 0; q < d; ++q) acc[q] += w * (xi[q] - xj[q]);
      }
      const double wn = phi_asymptotic_derivative(dim, squared_norm(xi) / (2.0 + 4.0 * gv));
      auto gi = out.gradient.row(i);
      for (std::size_t q = 0; q < d; ++q) gi[q] = self_coef * acc[q] - cross_coef * wn * xi[q];
    }
  });
  return out;
}

double cw_scalar_product_radial(const RadialGaussian& a, const RadialGaussian& b, Bandwidth gamma,
                                std::optional<PhiMode> mode) {
  if (a.mean.size() != b.mean.size()) {
    throw std::invalid_argument("cw_scalar_product_radial: dimension mismatch");
  }
  if (!(a.variance_scale >= 0.0) || !(b.variance_scale >= 0.0)) {
    throw std::domain_error("cw_scalar_product_radial: variance scale must be >= 0");
  }
  const int dim = checked_dim(a.mean.size());
  const double total = a.variance_scale + b.variance_scale + 2.0 * gamma.value();
  const double s = squared_distance(a.mean, b.mean) / (2.0 * total);
  return phi(dim, s, mode) / std::sqrt(2.0 * std::numbers::pi * total);
}

}  // namespace cwae
