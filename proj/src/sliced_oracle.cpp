#include "cwae/sliced_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cwae/parallel.hpp"
#include "cwae/rng.hpp"
#include "cwae/summation.hpp"
#include "sliced_kernel.hpp"

namespace cwae::oracle {
namespace {

// N(0, v)(0)
double gauss_peak(double variance) { return 1.0 / std::sqrt(2.0 * std::numbers::pi * variance); }

// Smoothed 1-D L2 distance from the three pairwise sums; every inner product
// <N(r1, gamma), N(r2, gamma)> equals N(r1 - r2, 2 gamma)(0).
double l2_from_projections(const double* a, std::size_t n, const double* b, std::size_t k, double gamma) {
  const double inv_c = 1.0 / (4.0 * gamma);
  const double saa = kernel::gauss_cross_sum(a, n, a, n, inv_c);
  const double sbb = kernel::gauss_cross_sum(b, k, b, k, inv_c);
  const double sab = kernel::gauss_cross_sum(a, n, b, k, inv_c);
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  const double bracket = n == k ? (saa + sbb - 2.0 * sab) / (dn * dn)
                                : saa / (dn * dn) + sbb / (dk * dk) - 2.0 * sab / (dn * dk);
  return gauss_peak(2.0 * gamma) * bracket;
}

// Smoothed slice of the sample against lambda_gamma(N(0, 1)) = N(0, 1 + gamma).
double l2_against_normal(const double* a, std::size_t n, double gamma) {
  const double dn = static_cast<double>(n);
  const double self = kernel::gauss_cross_sum(a, n, a, n, 1.0 / (4.0 * gamma)) / (dn * dn);
  const double cross = kernel::gauss_sum(a, n, 1.0 / (2.0 * (1.0 + 2.0 * gamma))) / dn;
  return gauss_peak(2.0 * gamma) * self + gauss_peak(2.0 + 2.0 * gamma) -
         2.0 * gauss_peak(1.0 + 2.0 * gamma) * cross;
}

McEstimate summarize(const std::vector<double>& values) {
  CompensatedSum sum;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  const double mean = sum.value() / n;
  CompensatedSum sq;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double variance = sq.value() / (n - 1.0);
  return McEstimate{mean, std::sqrt(variance / n), values.size()};
}

template <class SliceFn>
McEstimate run(std::size_t dim, std::size_t num_directions, std::uint64_t seed, SliceFn slice) {
  if (num_directions < 2) throw std::invalid_argument("monte carlo: need at least 2 directions");
  const DirectionSampler sampler(seed, dim);
  std::vector<double> values(num_directions);
  parallel_for(num_directions, [&](std::size_t begin, std::size_t end) {
    std::vector<double> v(dim);
    auto scratch = slice.make_scratch();
    for (std::size_t t = begin; t < end; ++t) {
      sampler.direction(t, v);
      values[t] = slice(v.data(), scratch);
    }
  });
  return summarize(values);
}

struct PairSlice {
  const Sample& x;
  const Sample& y;
  double gamma;
  struct Scratch {
    std::vector<double> px, py;
  };
  Scratch make_scratch() const { return {std::vector<double>(x.size()), std::vector<double>(y.size())}; }
  double operator()(const double* v, Scratch& s) const {
    kernel::project(x.points().values().data(), x.size(), x.dim(), v, s.px.data());
    kernel::project(y.points().values().data(), y.size(), y.dim(), v, s.py.data());
    return l2_from_projections(s.px.data(), x.size(), s.py.data(), y.size(), gamma);
  }
};

struct NormalSlice {
  const Sample& x;
  double gamma;
  using Scratch = std::vector<double>;
  Scratch make_scratch() const { return Scratch(x.size()); }
  double operator()(const double* v, Scratch& s) const {
    kernel::project(x.points().values().data(), x.size(), x.dim(), v, s.data());
    return l2_against_normal(s.data(), x.size(), gamma);
  }
};

}  // namespace

DirectionSampler::DirectionSampler(std::uint64_t seed, std::size_t dim) : seed_(seed), dim_(dim) {
  if (dim == 0) throw std::invalid_argument("DirectionSampler: dimension must be >= 1");
}

void DirectionSampler::direction(std::uint64_t index, std::span<double> out) const {
  if (out.size() != dim_) throw std::invalid_argument("DirectionSampler: output size mismatch");
  CounterRng rng(seed_ + index);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& c : out) {
      c = rng.normal();
      norm2 += c * c;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& c : out) c *= inv;
}

double l2_smoothed_1d(std::span<const double> a, std::span<const double> b, Bandwidth gamma) {
  if (a.empty() || b.empty()) throw std::invalid_argument("l2_smoothed_1d: empty input");
  return std::max(0.0, l2_from_projections(a.data(), a.size(), b.data(), b.size(), gamma.value()));
}

McEstimate cw2_monte_carlo(const Sample& x, const Sample& y, Bandwidth gamma,
                           std::size_t num_directions, std::uint64_t seed) {
  if (x.dim() != y.dim()) throw std::invalid_argument("cw2_monte_carlo: dimension mismatch");
  return run(x.dim(), num_directions, seed, PairSlice{x, y, gamma.value()});
}

McEstimate cw2_normal_monte_carlo(const Sample& x, Bandwidth gamma, std::size_t num_directions,
                                  std::uint64_t seed) {
  return run(x.dim(), num_directions, seed, NormalSlice{x, gamma.value()});
}

}  // namespace cwae::oracle
