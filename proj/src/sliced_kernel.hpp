#pragma once

#include <cstddef>

// Hot loops of the Monte-Carlo oracle. Compiled separately with relaxed
// floating-point flags; reductions use a fixed lane layout so results do not
// depend on buffer alignment.
namespace cwae::oracle::kernel {

/// sum_i sum_j exp(-(a_i - b_j)^2 * inv_c)
double gauss_cross_sum(const double* a, std::size_t n, const double* b, std::size_t k, double inv_c);

/// sum_i exp(-a_i^2 * inv_c)
double gauss_sum(const double* a, std::size_t n, double inv_c);

/// out_i = <points_i, v> for a row-major n x d block.
void project(const double* points, std::size_t n, std::size_t d, const double* v, double* out);

}  // namespace cwae::oracle::kernel
