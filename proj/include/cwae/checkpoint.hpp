#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "cwae/cwae.hpp"
#include "cwae/mlp.hpp"

namespace cwae::nn {

// Checkpoint layout, all integers little-endian:
//   "CWAECKPT"  u32 version (=1)
//   u32 hidden activation, u32 output activation (0 relu, 1 identity, 2 sigmoid)
//   u64 config length, config text (key=value lines)
//   u32 encoder layer count, u32 decoder layer count
//   per layer: u64 rows, u64 cols, rows*cols f64 weights (row-major), rows f64 biases
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  MlpParams params;
  std::string config_text;
};

void save_checkpoint(const std::filesystem::path& path, const MlpParams& params, const std::string& config_text);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Columns: epoch,rec_error,cw_pre_log,cw_post_log,skewness,kurtosis,normalized_kurtosis
void write_records_csv(const std::filesystem::path& path, std::span<const TrainRecord> records);

}  // namespace cwae::nn
