#pragma once

#include <cstddef>

#include "cwae/sample.hpp"

namespace cwae {

/// Mardia's multivariate skewness and kurtosis, on the raw (uncentred,
/// unwhitened) points, so the reference distribution is N(0, I) itself.
struct MardiaStats {
  double skewness;             ///< b1 = 1/n^2 sum_jk (x_j . x_k)^3
  double kurtosis;             ///< b2 = 1/n sum_j |x_j|^4
  double normalized_kurtosis;  ///< b2 - D(D + 2)
  std::size_t n;
  std::size_t dim;
};

MardiaStats mardia(const Sample& x);

namespace detail {
// Two routes to the same skewness: the pairwise definition, O(n^2 D), and the
// squared third-moment tensor sum_abc (sum_j x_ja x_jb x_jc)^2 / n^2, O(n D^3).
// mardia() picks the cheaper one.
double skewness_pairwise(const Sample& x);
double skewness_tensor(const Sample& x);
}  // namespace detail

}  // namespace cwae
