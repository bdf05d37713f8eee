#include "cwae/cli/train_job.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

namespace cwae::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ConfigError("config field '" + key + "': " + why);
}

class Fields {
 public:
  explicit Fields(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
      }
      const std::string key = trim(std::string_view(t).substr(0, eq));
      if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
      if (!values_.emplace(key, trim(std::string_view(t).substr(eq + 1))).second) bad(key, "given twice");
    }
  }

  const std::string* find(const std::string& key) {
    used_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }

  template <class T>
  void number(const std::string& key, T& out) {
    if (const auto* v = find(key)) out = parse<T>(key, *v);
  }

  void sizes(const std::string& key, std::vector<std::size_t>& out) {
    const auto* v = find(key);
    if (!v) return;
    out.clear();
    if (v->empty()) return;
    for (const auto& part : split(*v, ',')) out.push_back(parse<std::size_t>(key, part));
  }

  void flag(const std::string& key, bool& out) {
    const auto* v = find(key);
    if (!v) return;
    if (*v == "true" || *v == "1" || *v == "yes") {
      out = true;
    } else if (*v == "false" || *v == "0" || *v == "no") {
      out = false;
    } else {
      bad(key, "expected a boolean, got '" + *v + "'");
    }
  }

  template <class Fn>
  void text(const std::string& key, Fn&& apply) {
    const auto* v = find(key);
    if (!v) return;
    try {
      apply(*v);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      bad(key, e.what());
    }
  }

  void reject_unknown() const {
    for (const auto& [key, value] : values_) {
      if (!used_.count(key)) bad(key, "unknown key");
    }
  }

  template <class T>
  static T parse(const std::string& key, const std::string& value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
      bad(key, "cannot parse '" + value + "'");
    }
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

std::vector<double> doubles(const std::string& key, std::string_view text, char sep) {
  std::vector<double> out;
  for (const auto& part : split(text, sep)) out.push_back(Fields::parse<double>(key, part));
  return out;
}

}  // namespace

TrainJob parse_train_job(const std::string& text) {
  Fields f(text);
  TrainJob job;
  auto& m = job.model;
  f.number("latent_dim", m.latent_dim);
  f.sizes("encoder_hidden", m.encoder_hidden);
  f.sizes("decoder_hidden", m.decoder_hidden);
  f.text("hidden_activation", [&](const std::string& v) { m.hidden_activation = nn::parse_activation(v); });
  f.text("output_activation", [&](const std::string& v) { m.output_activation = nn::parse_activation(v); });
  f.number("batch_size", m.batch_size);
  f.number("epochs", m.epochs);
  f.number("learning_rate", m.adam.learning_rate);
  f.number("beta1", m.adam.beta1);
  f.number("beta2", m.adam.beta2);
  f.number("epsilon", m.adam.epsilon);
  f.text("objective", [&](const std::string& v) { m.objective = nn::parse_objective(v); });
  f.number("seed", m.seed);
  f.text("phi_mode", [&](const std::string& v) {
    if (v != "asymptotic") throw std::invalid_argument("only 'asymptotic' is differentiable");
    m.phi_mode = PhiMode::AsymptoticLargeD;
  });
  f.number("eps_log", m.eps_log);
  f.number("grad_clip", m.grad_clip);
  f.number("cw_weight", m.cw_weight);
  f.number("mardia_max_codes", m.mardia_max_codes);

  job.split_seed = m.seed;
  job.synthetic.seed = m.seed;
  f.text("data", [&](const std::string& v) {
    if (v == "csv") {
      job.source = DataSource::Csv;
    } else if (v == "idx") {
      job.source = DataSource::Idx;
    } else if (v == "synthetic") {
      job.source = DataSource::Synthetic;
    } else {
      throw std::invalid_argument("expected csv, idx or synthetic");
    }
  });
  f.text("data_path", [&](const std::string& v) { job.data_path = v; });
  f.flag("data_has_header", job.data_has_header);
  f.text("labels_path", [&](const std::string& v) { job.labels_path = v; });
  f.text("synthetic_kind", [&](const std::string& v) {
    if (v == "gaussian_mixture") {
      job.synthetic.kind = io::SyntheticKind::GaussianMixture;
    } else if (v == "uniform_cube") {
      job.synthetic.kind = io::SyntheticKind::UniformCube;
    } else {
      throw std::invalid_argument("expected gaussian_mixture or uniform_cube");
    }
  });
  f.number("synthetic_count", job.synthetic.count);
  f.number("synthetic_dim", job.synthetic.dim);
  f.number("synthetic_seed", job.synthetic.seed);
  std::vector<std::vector<double>> means;
  std::vector<double> variances;
  std::vector<double> weights;
  f.text("synthetic_means", [&](const std::string& v) {
    for (const auto& comp : split(v, ';')) means.push_back(doubles("synthetic_means", comp, ','));
  });
  f.text("synthetic_variances", [&](const std::string& v) { variances = doubles("synthetic_variances", v, ','); });
  f.text("synthetic_weights", [&](const std::string& v) { weights = doubles("synthetic_weights", v, ','); });
  f.number("valid_fraction", job.valid_fraction);
  f.number("split_seed", job.split_seed);
  f.reject_unknown();

  if (!means.empty()) {
    if (variances.empty()) variances.assign(means.size(), 1.0);
    if (weights.empty()) weights.assign(means.size(), 1.0 / static_cast<double>(means.size()));
    if (variances.size() != means.size()) bad("synthetic_variances", "need one value per component");
    if (weights.size() != means.size()) bad("synthetic_weights", "need one value per component");
    for (std::size_t c = 0; c < means.size(); ++c) {
      if (means[c].size() != job.synthetic.dim) bad("synthetic_means", "component has wrong dimension");
      job.synthetic.components.push_back({means[c], variances[c], weights[c]});
    }
  } else if (job.synthetic.kind == io::SyntheticKind::GaussianMixture) {
    job.synthetic.components.push_back({std::vector<double>(job.synthetic.dim, 0.0), 1.0, 1.0});
  }

  if (job.source == DataSource::Synthetic && job.synthetic.count == 0) bad("synthetic_count", "must be > 0");
  if (job.source != DataSource::Synthetic && job.data_path.empty()) bad("data_path", "required for csv/idx data");
  if (!(job.valid_fraction > 0.0 && job.valid_fraction < 1.0)) bad("valid_fraction", "must be in (0, 1)");
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return job;
}

TrainJob load_train_job(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_train_job(text.str());
}

io::Dataset load_job_data(const TrainJob& job) {
  switch (job.source) {
    case DataSource::Csv:
      return io::load_csv(job.data_path, job.data_has_header);
    case DataSource::Idx:
      return io::load_idx(job.data_path, job.labels_path);
    case DataSource::Synthetic:
      return io::generate(job.synthetic);
  }
  throw std::logic_error("unhandled data source");
}

}  // namespace cwae::cli
