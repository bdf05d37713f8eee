#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cwae/matrix.hpp"
#include "cwae/sample.hpp"
#include "cwae/special_fn.hpp"

namespace cwae {

/// Variance of the 1-D Gaussian smoothing kernel N(0, gamma); gamma > 0.
class Bandwidth {
 public:
  explicit Bandwidth(double gamma);
  double value() const noexcept { return gamma_; }
  friend bool operator==(const Bandwidth&, const Bandwidth&) = default;

 private:
  double gamma_;
};

/// Silverman's rule of thumb, (4 / (3n))^(2/5).
Bandwidth silverman_gamma(std::size_t n);

struct CwReport {
  double squared_distance;  ///< clamped at 0
  double pre_clamp;         ///< raw value before the clamp, for diagnostics
  Bandwidth gamma;
  PhiMode mode;
  std::size_t n;
  std::size_t k;  ///< size of the second sample; 0 when compared against N(0, I)
  std::size_t dim;
};

/// Squared Cramer-Wold distance between two samples.
///
/// For n == k this is the closed form
///   1/(2 n^2 sqrt(pi gamma)) * (sum_ii' phi(|x_i - x_i'|^2 / 4gamma)
///                               + sum_jj' phi(|y_j - y_j'|^2 / 4gamma)
///                               - 2 sum_ij phi(|x_i - y_j|^2 / 4gamma)).
/// Unequal sizes weight the three sums by 1/n^2, 1/k^2 and 2/(nk). The default
/// bandwidth is silverman_gamma(min(n, k)). The pair is put in a canonical
/// order before summing, so the result is bit-for-bit symmetric in (x, y).
/// Throws std::invalid_argument on dimension mismatch.
CwReport cw2_sample_sample(const Sample& x, const Sample& y,
                           std::optional<Bandwidth> gamma = std::nullopt,
                           std::optional<PhiMode> mode = std::nullopt);

/// Squared Cramer-Wold distance between a sample and N(0, I):
///   1/(2 n^2 sqrt(pi)) * (1/sqrt(gamma) sum_ij phi(|x_i - x_j|^2 / 4gamma)
///                         + n^2 / sqrt(1 + gamma)
///                         - 2n / sqrt(gamma + 1/2) sum_i phi(|x_i|^2 / (2 + 4gamma))).
/// The default bandwidth is silverman_gamma(n).
CwReport cw2_sample_normal(const Sample& x, std::optional<Bandwidth> gamma = std::nullopt,
                           std::optional<PhiMode> mode = std::nullopt);

/// Value and gradient of cw2_sample_normal in the asymptotic regime.
struct CwNormalGradient {
  CwReport report;  ///< exactly cw2_sample_normal(x, gamma, AsymptoticLargeD)
  Matrix gradient;  ///< d pre_clamp / d x, same shape as x
};

CwNormalGradient cw2_sample_normal_gradient(const Sample& x, Bandwidth gamma);

/// N(mean, variance_scale * I) in R^D.
struct RadialGaussian {
  std::vector<double> mean;
  double variance_scale = 0.0;
};

/// Cramer-Wold scalar product of two radial Gaussians:
///   (2 pi (a + b + 2 gamma))^(-1/2) * phi(|x - y|^2 / (2 (a + b + 2 gamma))).
double cw_scalar_product_radial(const RadialGaussian& a, const RadialGaussian& b, Bandwidth gamma,
                                std::optional<PhiMode> mode = std::nullopt);

}  // namespace cwae
