#include "cwae/normality.hpp"

#include <algorithm>
#include <vector>

#include "cwae/parallel.hpp"
#include "cwae/summation.hpp"

namespace cwae {
namespace detail {

double skewness_pairwise(const Sample& x) {
  const std::size_t n = x.size();
  std::vector<double> rows(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const auto xj = x.point(j);
      const double diag = dot(xj, xj);
      CompensatedSum acc;
      acc += diag * diag * diag;
      for (std::size_t k = j + 1; k < n; ++k) {
        const double p = dot(xj, x.point(k));
        acc += 2.0 * p * p * p;
      }
      rows[j] = acc.value();
    }
  });
  CompensatedSum total;
  for (double r : rows) total += r;
  const double dn = static_cast<double>(n);
  return total.value() / (dn * dn);
}

double skewness_tensor(const Sample& x) {
  const std::size_t d = x.dim();
  // Only a <= b <= c is stored; multiplicity restores the full sum of squares.
  std::vector<double> t(d * d * d, 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto p = x.point(j);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a; b < d; ++b) {
        const double pab = p[a] * p[b];
        double* row = &t[(a * d + b) * d];
        for (std::size_t c = b; c < d; ++c) row[c] += pab * p[c];
      }
    }
  }
  CompensatedSum total;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      for (std::size_t c = b; c < d; ++c) {
        const double v = t[(a * d + b) * d + c];
        const double mult = (a == b && b == c) ? 1.0 : (a == b || b == c) ? 3.0 : 6.0;
        total += mult * v * v;
      }
    }
  }
  const double dn = static_cast<double>(x.size());
  return total.value() / (dn * dn);
}

}  // namespace detail

MardiaStats mardia(const Sample& x) {
  const double n = static_cast<double>(x.size());
  const double d = static_cast<double>(x.dim());
  const double pairwise_cost = 0.5 * n * n * d;
  const double tensor_cost = n * d * d * d / 6.0 + d * d * d;
  const double skew =
      tensor_cost < pairwise_cost ? detail::skewness_tensor(x) : detail::skewness_pairwise(x);

  CompensatedSum kurt;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double r2 = squared_norm(x.point(j));
    kurt += r2 * r2;
  }
  const double b2 = kurt.value() / n;
  return MardiaStats{std::max(0.0, skew), b2, b2 - d * (d + 2.0), x.size(), x.dim()};
}

}  // namespace cwae
