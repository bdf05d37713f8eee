#include "cwae/sample.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cwae {

Sample::Sample(Matrix points) : points_(std::move(points)) {
  if (points_.rows() == 0) throw std::invalid_argument("Sample: empty sample");
  if (points_.cols() == 0) throw std::invalid_argument("Sample: zero dimension");
  const auto v = points_.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k])) {
      throw std::invalid_argument("Sample: non-finite entry at row " +
                                  std::to_string(k / points_.cols()) + ", column " +
                                  std::to_string(k % points_.cols()));
    }
  }
}

}  // namespace cwae
