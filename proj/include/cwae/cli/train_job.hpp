#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "cwae/cwae.hpp"
#include "cwae/data_io.hpp"

namespace cwae::cli {

/// Error in a training config file; the message names the field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class DataSource { Csv, Idx, Synthetic };

/// Everything `cwae train` needs: the model's TrainConfig plus where the data
/// comes from and how it is split.
///
/// Config file: flat `key=value` lines; blank lines and lines starting with '#'
/// are ignored. Keys are the TrainConfig fields (see nn::to_text) and:
///   data=csv|idx|synthetic, data_path, data_has_header, labels_path,
///   synthetic_kind=gaussian_mixture|uniform_cube, synthetic_count,
///   synthetic_dim, synthetic_means (components ';'-separated, coordinates
///   ','-separated), synthetic_variances, synthetic_weights, synthetic_seed,
///   valid_fraction, split_seed.
struct TrainJob {
  nn::TrainConfig model;
  DataSource source = DataSource::Synthetic;
  std::filesystem::path data_path;
  bool data_has_header = false;
  std::optional<std::filesystem::path> labels_path;
  io::SyntheticSpec synthetic;
  double valid_fraction = 0.1;
  std::uint64_t split_seed = 0;
};

TrainJob parse_train_job(const std::string& text);
TrainJob load_train_job(const std::filesystem::path& path);

/// Loads or generates the dataset the job describes.
io::Dataset load_job_data(const TrainJob& job);

}  // namespace cwae::cli
