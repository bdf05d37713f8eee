#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "cwae/cw_core.hpp"
#include "cwae/sample.hpp"

// Monte-Carlo evaluation of the sliced definition of the Cramer-Wold distance:
// project onto a random unit direction, smooth each 1-D projection with
// N(0, gamma), take the squared L2 distance, and average over directions.
// Nothing here calls phi_D; only 1-D Gaussian products are used.
namespace cwae::oracle {

/// Uniform directions on the unit sphere in R^D, from normalized i.i.d.
/// normals. Direction `index` depends only on (seed, index).
class DirectionSampler {
 public:
  DirectionSampler(std::uint64_t seed, std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  void direction(std::uint64_t index, std::span<double> out) const;

 private:
  std::uint64_t seed_;
  std::size_t dim_;
};

/// ||lambda_gamma(a) - lambda_gamma(b)||_2^2 for 1-D samples a, b.
double l2_smoothed_1d(std::span<const double> a, std::span<const double> b, Bandwidth gamma);

struct McEstimate {
  double estimate;   ///< mean over directions
  double std_error;  ///< standard error of that mean
  std::size_t directions;
};

/// Throws std::invalid_argument on dimension mismatch or num_directions < 2.
McEstimate cw2_monte_carlo(const Sample& x, const Sample& y, Bandwidth gamma,
                           std::size_t num_directions, std::uint64_t seed);

/// Same estimator against N(0, I), whose projection on every direction is N(0, 1).
McEstimate cw2_normal_monte_carlo(const Sample& x, Bandwidth gamma, std::size_t num_directions,
                                  std::uint64_t seed);

}  // namespace cwae::oracle
