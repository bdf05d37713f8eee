#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cwae/cli/report.hpp"
#include "cwae/special_fn.hpp"

namespace cwae::cli {

/// Process exit codes shared by every command.
enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsageError = 2 };

/// Thrown for bad flag values; maps to kUsageError.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses --mode: auto (nullopt), exact, asymptotic, bessel2.
std::optional<PhiMode> parse_mode(const std::string& text);

struct DistArgs {
  std::filesystem::path x_path;
  std::optional<std::filesystem::path> y_path;
  bool has_header = false;
  std::optional<double> gamma;
  std::optional<PhiMode> mode;
};

struct OracleArgs {
  std::filesystem::path x_path;
  std::optional<std::filesystem::path> y_path;
  bool has_header = false;
  std::optional<double> gamma;
  std::optional<PhiMode> mode = PhiMode::ExactSeries;
  std::size_t directions = 200000;
  std::uint64_t seed = 0;
};

struct NormalityArgs {
  std::filesystem::path x_path;
  bool has_header = false;
};

struct TrainArgs {
  std::filesystem::path config_path;
  std::filesystem::path out_dir = ".";
};

struct BenchArgs {
  std::vector<std::size_t> batch_sizes{128, 256};
  std::size_t dim = 20;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
};

/// Doubling the batch must scale time by a factor in this range.
inline constexpr double kBenchRatioLow = 2.5;
inline constexpr double kBenchRatioHigh = 6.0;

/// Squared CW distance between two CSV samples, or against N(0, I) when y is absent.
RunReport cmd_dist(const DistArgs& args);
/// Closed form versus sliced Monte-Carlo; exit code 1 when |z| > 4.
RunReport cmd_oracle_validate(const OracleArgs& args);
RunReport cmd_normality(const NormalityArgs& args);
/// Trains, then writes checkpoint.bin and records.csv into out_dir.
RunReport cmd_train(const TrainArgs& args);
/// Mean per-batch time of the CW value and gradient; exit code 1 when a
/// doubling of n falls outside [kBenchRatioLow, kBenchRatioHigh].
RunReport cmd_bench(const BenchArgs& args);

/// Full command-line entry point: parses argv, runs the command, prints the
/// report (or writes it to --out), and returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cwae::cli
