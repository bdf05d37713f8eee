#include "cwae/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cwae/checkpoint.hpp"
#include "cwae/cli/train_job.hpp"
#include "cwae/cw_core.hpp"
#include "cwae/data_io.hpp"
#include "cwae/normality.hpp"
#include "cwae/parallel.hpp"
#include "cwae/sliced_oracle.hpp"

namespace cwae::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string mode_name(const std::optional<PhiMode>& mode) {
  return mode ? std::string(to_string(*mode)) : "auto";
}

void add_cw_report(RunReport& report, const CwReport& cw) {
  report.add_result("squared_distance", cw.squared_distance);
  report.add_result("pre_clamp", cw.pre_clamp);
  report.add_result("gamma", cw.gamma.value());
  report.add_result("mode", std::string(to_string(cw.mode)));
  report.add_result("n", std::to_string(cw.n));
  report.add_result("k", std::to_string(cw.k));
  report.add_result("dim", std::to_string(cw.dim));
}

void add_mardia(RunReport& report, const MardiaStats& m, const std::string& prefix = "") {
  report.add_result(prefix + "skewness", m.skewness);
  report.add_result(prefix + "kurtosis", m.kurtosis);
  report.add_result(prefix + "normalized_kurtosis", m.normalized_kurtosis);
}

std::optional<Bandwidth> to_bandwidth(const std::optional<double>& gamma) {
  if (!gamma) return std::nullopt;
  if (!(*gamma > 0.0)) throw UsageError("--gamma must be positive");
  return Bandwidth(*gamma);
}

}  // namespace

std::optional<PhiMode> parse_mode(const std::string& text) {
  if (text == "auto") return std::nullopt;
  if (text == "exact") return PhiMode::ExactSeries;
  if (text == "asymptotic") return PhiMode::AsymptoticLargeD;
  if (text == "bessel2") return PhiMode::BesselD2;
  throw UsageError("--mode must be one of auto, exact, asymptotic, bessel2 (got '" + text + "')");
}

RunReport cmd_dist(const DistArgs& args) {
  const auto start = Clock::now();
  RunReport report;
  report.command = "dist";
  report.add_config("x", args.x_path.string());
  report.add_config("y", args.y_path ? args.y_path->string() : "N(0,I)");
  report.add_config("mode", mode_name(args.mode));
  report.add_config("gamma", args.gamma ? format_double(*args.gamma) : "silverman");

  const auto gamma = to_bandwidth(args.gamma);
  const auto x = io::load_csv(args.x_path, args.has_header);
  if (args.y_path) {
    const auto y = io::load_csv(*args.y_path, args.has_header);
    add_cw_report(report, cw2_sample_sample(x.data, y.data, gamma, args.mode));
  } else {
    add_cw_report(report, cw2_sample_normal(x.data, gamma, args.mode));
  }
  report.add_timing("total", seconds_since(start));
  return report;
}

RunReport cmd_oracle_validate(const OracleArgs& args) {
  const auto start = Clock::now();
  if (args.directions < 2) throw UsageError("--directions must be >= 2");
  RunReport report;
  report.command = "oracle-validate";
  report.add_config("x", args.x_path.string());
  report.add_config("y", args.y_path ? args.y_path->string() : "N(0,I)");
  report.add_config("mode", mode_name(args.mode));
  report.add_config("directions", std::to_string(args.directions));
  report.add_config("seed", std::to_string(args.seed));

  const auto x = io::load_csv(args.x_path, args.has_header);
  std::optional<io::Dataset> y;
  if (args.y_path) y = io::load_csv(*args.y_path, args.has_header);
  const Bandwidth gamma =
      to_bandwidth(args.gamma).value_or(silverman_gamma(y ? std::min(x.data.size(), y->data.size()) : x.data.size()));
  report.add_config("gamma", gamma.value());

  const auto closed_start = Clock::now();
  const CwReport closed = y ? cw2_sample_sample(x.data, y->data, gamma, args.mode)
                            : cw2_sample_normal(x.data, gamma, args.mode);
  report.add_timing("closed_form", seconds_since(closed_start));

  const auto mc_start = Clock::now();
  const auto mc = y ? oracle::cw2_monte_carlo(x.data, y->data, gamma, args.directions, args.seed)
                    : oracle::cw2_normal_monte_carlo(x.data, gamma, args.directions, args.seed);
  report.add_timing("monte_carlo", seconds_since(mc_start));

  const double diff = closed.pre_clamp - mc.estimate;
  double z = 0.0;
  if (mc.std_error > 0.0) {
    z = diff / mc.std_error;
  } else if (diff != 0.0) {
    z = std::copysign(INFINITY, diff);
  }
  report.add_result("closed_form", closed.pre_clamp);
  report.add_result("mode", std::string(to_string(closed.mode)));
  report.add_result("mc_estimate", mc.estimate);
  report.add_result("mc_std_error", mc.std_error);
  report.add_result("z_score", z);
  const bool ok = std::fabs(z) <= 4.0;
  report.add_result("status", ok ? "pass" : "fail");
  report.exit_code = ok ? kOk : kValidationFailure;
  report.add_timing("total", seconds_since(start));
  return report;
}

RunReport cmd_normality(const NormalityArgs& args) {
  const auto start = Clock::now();
  RunReport report;
  report.command = "normality";
  report.add_config("x", args.x_path.string());
  const auto x = io::load_csv(args.x_path, args.has_header);
  const auto stats = mardia(x.data);
  report.add_result("n", std::to_string(stats.n));
  report.add_result("dim", std::to_string(stats.dim));
  add_mardia(report, stats);
  report.add_result("expected_kurtosis", static_cast<double>(stats.dim * (stats.dim + 2)));
  report.add_timing("total", seconds_since(start));
  return report;
}

RunReport cmd_train(const TrainArgs& args) {
  const auto start = Clock::now();
  const TrainJob job = load_train_job(args.config_path);
  RunReport report;
  report.command = "train";
  report.add_config("config_path", args.config_path.string());
  std::istringstream echo(nn::to_text(job.model));
  for (std::string line; std::getline(echo, line);) {
    const auto eq = line.find('=');
    report.add_config(line.substr(0, eq), line.substr(eq + 1));
  }

  const auto data = load_job_data(job);
  const auto split = io::train_valid_split(data, job.valid_fraction, job.split_seed);
  report.add_config("train_points", std::to_string(split.train.data.size()));
  report.add_config("valid_points", std::to_string(split.valid.data.size()));
  report.add_config("data", data.source);

  const auto result = nn::train(job.model, split.train.data, split.valid.data);
  std::filesystem::create_directories(args.out_dir);
  const auto ckpt = args.out_dir / "checkpoint.bin";
  const auto curves = args.out_dir / "records.csv";
  nn::save_checkpoint(ckpt, result.params, nn::to_text(job.model));
  nn::write_records_csv(curves, result.records);

  const auto& last = result.records.back();
  report.add_result("epochs_recorded", std::to_string(result.records.size()));
  report.add_result("final_rec_error", last.reconstruction_error);
  report.add_result("final_cw_pre_log", last.cw_pre_log);
  report.add_result("final_cw_post_log", last.cw_post_log);
  add_mardia(report, last.mardia, "final_");
  report.add_result("checkpoint", ckpt.string());
  report.add_result("records_csv", curves.string());
  report.add_timing("total", seconds_since(start));
  return report;
}

RunReport cmd_bench(const BenchArgs& args) {
  const auto start = Clock::now();
  if (args.repeats == 0) throw UsageError("--repeats must be >= 1");
  if (args.batch_sizes.empty()) throw UsageError("--batch-sizes needs at least one value");
  if (args.dim < 2) throw UsageError("--dim must be >= 2");
  for (auto n : args.batch_sizes) {
    if (n < 2) throw UsageError("batch sizes must be >= 2");
  }
  RunReport report;
  report.command = "bench";
  std::string sizes;
  for (auto n : args.batch_sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(n);
  report.add_config("batch_sizes", sizes);
  report.add_config("dim", std::to_string(args.dim));
  report.add_config("repeats", std::to_string(args.repeats));

  std::vector<double> means;
  double sink = 0.0;
  for (std::size_t b = 0; b < args.batch_sizes.size(); ++b) {
    const std::size_t n = args.batch_sizes[b];
    const Sample batch = io::standard_normal_sample(n, args.dim, args.seed + b);
    const Bandwidth gamma = silverman_gamma(n);
    sink += cw2_sample_normal_gradient(batch, gamma).report.pre_clamp;  // warm-up

    // Each repeat runs enough evaluations to span at least ~20 ms.
    std::size_t inner = 1;
    {
      const auto t0 = Clock::now();
      sink += cw2_sample_normal_gradient(batch, gamma).report.pre_clamp;
      const double once = std::max(seconds_since(t0), 1e-7);
      inner = static_cast<std::size_t>(std::ceil(0.02 / once));
    }
    double total = 0.0;
    for (std::size_t r = 0; r < args.repeats; ++r) {
      const auto t0 = Clock::now();
      for (std::size_t i = 0; i < inner; ++i) sink += cw2_sample_normal_gradient(batch, gamma).gradient(0, 0);
      total += seconds_since(t0);
    }
    const double mean = total / static_cast<double>(args.repeats * inner);
    means.push_back(mean);
    report.add_result("mean_batch_time_s.n" + std::to_string(n), mean);
  }

  bool ok = true;
  for (std::size_t b = 1; b < means.size(); ++b) {
    const std::size_t n0 = args.batch_sizes[b - 1];
    const std::size_t n1 = args.batch_sizes[b];
    const double ratio = means[b] / means[b - 1];
    const std::string key = std::to_string(n1) + "_vs_" + std::to_string(n0);
    report.add_result("ratio." + key, ratio);
    report.add_result("exponent." + key, std::log(ratio) / std::log(static_cast<double>(n1) / n0));
    if (n1 == 2 * n0 && (ratio < kBenchRatioLow || ratio > kBenchRatioHigh)) ok = false;
  }
  report.add_result("status", ok ? "pass" : "fail");
  report.add_result("checksum", sink);
  report.exit_code = ok ? kOk : kValidationFailure;
  report.add_timing("total", seconds_since(start));
  return report;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cramer-Wold distances, normality statistics and CWAE training"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  unsigned threads = 0;
  std::optional<std::filesystem::path> out_path;
  bool dump_json = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out_path, "write the report to this file instead of stdout");
    sub->add_flag("--dump", dump_json, "emit the report as structured JSON");
  };

  std::string mode_text = "auto";
  std::string oracle_mode_text = "exact";

  DistArgs dist;
  auto* dist_cmd = app.add_subcommand("dist", "squared CW distance between samples or to N(0,I)");
  dist_cmd->add_option("-x,--x", dist.x_path, "CSV sample X")->required();
  dist_cmd->add_option("-y,--y", dist.y_path, "CSV sample Y (omit for N(0,I))");
  dist_cmd->add_option("--gamma", dist.gamma, "smoothing variance (default: Silverman)");
  dist_cmd->add_option("--mode", mode_text, "phi regime: auto|exact|asymptotic|bessel2");
  dist_cmd->add_flag("--header", dist.has_header, "CSV files have a header row");
  add_common(dist_cmd);

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle-validate", "closed form vs sliced Monte-Carlo");
  oracle_cmd->add_option("-x,--x", oracle.x_path, "CSV sample X")->required();
  oracle_cmd->add_option("-y,--y", oracle.y_path, "CSV sample Y (omit for N(0,I))");
  oracle_cmd->add_option("--gamma", oracle.gamma, "smoothing variance (default: Silverman)");
  oracle_cmd->add_option("--mode", oracle_mode_text, "phi regime of the closed form (default exact)");
  oracle_cmd->add_option("--directions", oracle.directions, "number of random directions");
  oracle_cmd->add_option("--seed", oracle.seed, "direction seed");
  oracle_cmd->add_flag("--header", oracle.has_header, "CSV files have a header row");
  add_common(oracle_cmd);

  NormalityArgs normality;
  auto* norm_cmd = app.add_subcommand("normality", "Mardia skewness and kurtosis");
  norm_cmd->add_option("-x,--x", normality.x_path, "CSV sample")->required();
  norm_cmd->add_flag("--header", normality.has_header, "CSV file has a header row");
  add_common(norm_cmd);

  TrainArgs train;
  std::optional<std::filesystem::path> train_dir;
  auto* train_cmd = app.add_subcommand("train", "train a CWAE or plain autoencoder");
  train_cmd->add_option("config", train.config_path, "key=value config file")->required();
  train_cmd->add_option("--checkpoint-dir", train_dir, "directory for checkpoint.bin and records.csv");
  add_common(train_cmd);

  BenchArgs bench;
  std::uint64_t bench_seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "per-batch time of the CW term and its gradient");
  bench_cmd->add_option("--batch-sizes", bench.batch_sizes, "batch sizes")->delimiter(',');
  bench_cmd->add_option("--dim", bench.dim, "latent dimension");
  bench_cmd->add_option("--repeats", bench.repeats, "timed repeats per batch size");
  bench_cmd->add_option("--seed", bench_seed, "seed for the random batches");
  add_common(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  RunReport report;
  try {
    set_thread_count(threads);
    if (dist_cmd->parsed()) {
      dist.mode = parse_mode(mode_text);
      report = cmd_dist(dist);
    } else if (oracle_cmd->parsed()) {
      oracle.mode = parse_mode(oracle_mode_text);
      report = cmd_oracle_validate(oracle);
    } else if (norm_cmd->parsed()) {
      report = cmd_normality(normality);
    } else if (train_cmd->parsed()) {
      if (train_dir) train.out_dir = *train_dir;
      report = cmd_train(train);
    } else {
      bench.seed = bench_seed;
      report = cmd_bench(bench);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  std::string args_echo;
  for (int i = 1; i < argc; ++i) args_echo += (i > 1 ? " " : "") + std::string(argv[i]);
  report.command = args_echo;
  report.add_config("threads", std::to_string(thread_count()));
  const std::string text = dump_json ? report.to_json().dump(2) + "\n" : report.to_text();
  if (out_path) {
    std::ofstream file(*out_path);
    if (!file) {
      err << "error: cannot write " << out_path->string() << '\n';
      return kUsageError;
    }
    file << text;
  } else {
    out << text;
  }
  return report.exit_code;
}

}  // namespace cwae::cli
