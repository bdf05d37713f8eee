#include "cwae/cli/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cwae::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void RunReport::add_config(std::string key, double value) { add_config(std::move(key), format_double(value)); }

void RunReport::add_result(std::string key, double value) { add_result(std::move(key), format_double(value)); }

const std::string& RunReport::result(std::string_view key) const {
  for (const auto& [k, v] : results) {
    if (k == key) return v;
  }
  throw std::out_of_range("RunReport: no result '" + std::string(key) + "'");
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "command=" << command << '\n' << "version=" << kVersion << '\n';
  for (const auto& [k, v] : config) out << "config." << k << '=' << v << '\n';
  for (const auto& [k, v] : results) out << "result." << k << '=' << v << '\n';
  for (const auto& [k, v] : timings) out << "timing." << k << "_s=" << format_double(v) << '\n';
  out << "exit_code=" << exit_code << '\n';
  return out.str();
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = std::string(kVersion);
  j["config"] = nlohmann::json::object();
  for (const auto& [k, v] : config) j["config"][k] = v;
  j["results"] = nlohmann::json::object();
  for (const auto& [k, v] : results) j["results"][k] = v;
  j["timings_s"] = nlohmann::json::object();
  for (const auto& [k, v] : timings) j["timings_s"][k] = v;
  j["exit_code"] = exit_code;
  return j;
}

}  // namespace cwae::cli
