#include "sliced_kernel.hpp"

#include <cmath>

namespace cwae::oracle::kernel {
namespace {
constexpr std::size_t kLanes = 8;

double fold(const double (&lanes)[kLanes]) {
  return ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7]));
}
}  // namespace

double gauss_cross_sum(const double* a, std::size_t n, const double* b, std::size_t k, double inv_c) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a[i];
    double lanes[kLanes] = {};
    std::size_t j = 0;
    for (; j + kLanes <= k; j += kLanes) {
      for (std::size_t l = 0; l < kLanes; ++l) {
        const double d = ai - b[j + l];
        lanes[l] += std::exp(-d * d * inv_c);
      }
    }
    double tail = 0.0;
    for (; j < k; ++j) {
      const double d = ai - b[j];
      tail += std::exp(-d * d * inv_c);
    }
    total += fold(lanes) + tail;
  }
  return total;
}

double gauss_sum(const double* a, std::size_t n, double inv_c) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += std::exp(-a[i] * a[i] * inv_c);
  return total;
}

void project(const double* points, std::size_t n, std::size_t d, const double* v, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = points + i * d;
    double lanes[kLanes] = {};
    std::size_t q = 0;
    for (; q + kLanes <= d; q += kLanes) {
      for (std::size_t l = 0; l < kLanes; ++l) lanes[l] += p[q + l] * v[q + l];
    }
    double tail = 0.0;
    for (; q < d; ++q) tail += p[q] * v[q];
    out[i] = fold(lanes) + tail;
  }
}

}  // namespace cwae::oracle::kernel
