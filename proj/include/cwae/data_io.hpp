#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwae/sample.hpp"

namespace cwae::io {

/// Malformed or truncated input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Dataset {
  Sample data;
  std::optional<std::vector<int>> labels;  ///< one per point when present
  std::string source;
};

/// Rectangular numeric CSV, one point per row. Quoted fields are accepted;
/// numbers always use '.' as the decimal separator. Errors carry the 1-based
/// line and column of the offending field.
Dataset load_csv(const std::filesystem::path& path, bool has_header = false);

/// Writes with 17 significant digits so load_csv round-trips exactly.
void write_csv(const std::filesystem::path& path, const Sample& sample,
               std::span<const std::string> header = {});

/// MNIST-style IDX files: images with magic 0x00000803 (count, rows, cols) and
/// optional labels with magic 0x00000801 (count). Pixels are scaled to [0, 1].
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::optional<std::filesystem::path>& labels_path = std::nullopt);

void write_idx_images(const std::filesystem::path& path, std::span<const std::uint8_t> pixels,
                      std::uint32_t count, std::uint32_t rows, std::uint32_t cols);
void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels);

enum class SyntheticKind { GaussianMixture, UniformCube };

struct MixtureComponent {
  std::vector<double> mean;
  double variance = 1.0;  ///< isotropic: covariance = variance * I
  double weight = 1.0;
};

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::GaussianMixture;
  std::size_t dim = 2;
  std::vector<MixtureComponent> components;  ///< GaussianMixture only
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

/// Seeded sample generation. Gaussian mixtures draw the component first and
/// record it as the label; UniformCube is uniform on [-1, 1]^D.
Dataset generate(const SyntheticSpec& spec);

/// n points from N(0, I_D), drawn with the library's counter-based generator.
Sample standard_normal_sample(std::size_t n, std::size_t dim, std::uint64_t seed);

struct Split {
  Dataset train;
  Dataset valid;
};

/// Seeded permutation, then the first round(n * valid_fraction) points go to
/// validation. Both parts must end up non-empty.
Split train_valid_split(const Dataset& dataset, double valid_fraction = 0.1, std::uint64_t seed = 0);

/// Rows of `source` selected by `indices`, in that order.
Matrix gather_rows(const Matrix& source, std::span<const std::size_t> indices);

}  // namespace cwae::io
