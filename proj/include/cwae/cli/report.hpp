#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace cwae::cli {

inline constexpr std::string_view kVersion = "1.0.0";

/// Outcome of one CLI command. Rendered as `key=value` lines:
///
///   command=<echo>
///   version=<library version>
///   config.<name>=<value>      resolved configuration
///   result.<name>=<value>      payload
///   timing.<name>_s=<seconds>  wall clock
///   exit_code=<0|1|2>
///
/// Floating-point values use 17 significant digits, so they parse back to the
/// exact double the library returned.
struct RunReport {
  using Entries = std::vector<std::pair<std::string, std::string>>;

  std::string command;
  Entries config;
  Entries results;
  std::vector<std::pair<std::string, double>> timings;
  int exit_code = 0;

  void add_config(std::string key, std::string value) { config.emplace_back(std::move(key), std::move(value)); }
  void add_config(std::string key, double value);
  void add_result(std::string key, std::string value) { results.emplace_back(std::move(key), std::move(value)); }
  void add_result(std::string key, double value);
  void add_timing(std::string key, double seconds) { timings.emplace_back(std::move(key), seconds); }

  /// Looks up a result value by key; throws std::out_of_range if absent.
  const std::string& result(std::string_view key) const;

  std::string to_text() const;
  nlohmann::json to_json() const;
};

/// %.17g formatting.
std::string format_double(double v);

}  // namespace cwae::cli
