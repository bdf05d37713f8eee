#pragma once

#include <cstddef>
#include <span>

#include "cwae/matrix.hpp"

namespace cwae {

/// A finite point cloud: n points (rows) in R^D (columns), n >= 1, D >= 1.
///
/// Construction validates the shape and rejects non-finite entries, so every
/// operation taking a Sample may assume a non-empty, finite input.
class Sample {
 public:
  explicit Sample(Matrix points);

  std::size_t size() const noexcept { return points_.rows(); }
  std::size_t dim() const noexcept { return points_.cols(); }
  std::span<const double> point(std::size_t i) const { return points_.row(i); }
  const Matrix& points() const noexcept { return points_; }

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  Matrix points_;
};

}  // namespace cwae
