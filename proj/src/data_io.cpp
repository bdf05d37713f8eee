#include "cwae/data_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cwae/rng.hpp"

namespace cwae::io {
namespace {

std::string location(std::size_t line, std::size_t column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one CSV record; quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && trim(current).empty()) {
      quoted = true;
      was_quoted = true;
      current.clear();
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : std::string(trim(current)));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (quoted) throw FormatError("unterminated quote at " + location(line_no, fields.size() + 1));
  fields.push_back(was_quoted ? current : std::string(trim(current)));
  return fields;
}

double parse_number(std::string_view text, std::size_t line, std::size_t column) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw FormatError("cannot parse '" + std::string(text) + "' as a number at " + location(line, column));
  }
  if (!std::isfinite(value)) throw FormatError("non-finite value at " + location(line, column));
  return value;
}

std::uint32_t read_be32(std::istream& in, const std::string& what) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw FormatError(what + ": truncated header");
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
         std::uint32_t{b[3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                              static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b.data(), 4);
}

std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::vector<unsigned char> read_payload(std::istream& in, std::size_t bytes, const std::string& what) {
  std::vector<unsigned char> buf(bytes);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes))) {
    throw FormatError(what + ": truncated payload (expected " + std::to_string(bytes) + " bytes)");
  }
  return buf;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto fields = split_record(line, line_no);
    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw FormatError("ragged row at line " + std::to_string(line_no) + ": expected " +
                        std::to_string(cols) + " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) values.push_back(parse_number(fields[c], line_no, c + 1));
    ++rows;
  }
  if (rows == 0) throw FormatError(path.string() + ": no data rows");
  return Dataset{Sample(Matrix(rows, cols, std::move(values))), std::nullopt, "csv:" + path.string()};
}

void write_csv(const std::filesystem::path& path, const Sample& sample, std::span<const std::string> header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (!header.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
  }
  std::array<char, 32> buf{};
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto row = sample.point(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), row[c],
                                     std::chars_format::general, 17);
      if (c) out << ',';
      out.write(buf.data(), res.ptr - buf.data());
    }
    out << '\n';
  }
}

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::optional<std::filesystem::path>& labels_path) {
  auto in = open_binary(images_path);
  const std::string what = images_path.string();
  const std::uint32_t magic = read_be32(in, what);
  if (magic != 0x00000803u) {
    std::ostringstream msg;
    msg << what << ": bad magic 0x" << std::hex << magic << " (expected 0x00000803)";
    throw FormatError(msg.str());
  }
  const std::uint32_t count = read_be32(in, what);
  const std::uint32_t rows = read_be32(in, what);
  const std::uint32_t cols = read_be32(in, what);
  const std::size_t dim = std::size_t{rows} * cols;
  if (count == 0 || dim == 0) throw FormatError(what + ": empty image set");
  const auto pixels = read_payload(in, std::size_t{count} * dim, what);
  std::vector<double> values(pixels.size());
  std::transform(pixels.begin(), pixels.end(), values.begin(),
                 [](unsigned char p) { return static_cast<double>(p) / 255.0; });

  Dataset ds{Sample(Matrix(count, dim, std::move(values))), std::nullopt, "idx:" + what};
  if (labels_path) {
    auto lin = open_binary(*labels_path);
    const std::string lwhat = labels_path->string();
    const std::uint32_t lmagic = read_be32(lin, lwhat);
    if (lmagic != 0x00000801u) {
      std::ostringstream msg;
      msg << lwhat << ": bad magic 0x" << std::hex << lmagic << " (expected 0x00000801)";
      throw FormatError(msg.str());
    }
    const std::uint32_t lcount = read_be32(lin, lwhat);
    if (lcount != count) {
      throw FormatError("label count " + std::to_string(lcount) + " does not match image count " +
                        std::to_string(count));
    }
    const auto raw = read_payload(lin, lcount, lwhat);
    ds.labels = std::vector<int>(raw.begin(), raw.end());
  }
  return ds;
}

void write_idx_images(const std::filesystem::path& path, std::span<const std::uint8_t> pixels,
                      std::uint32_t count, std::uint32_t rows, std::uint32_t cols) {
  if (pixels.size() != std::size_t{count} * rows * cols) {
    throw std::invalid_argument("write_idx_images: pixel count does not match shape");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_be32(out, 0x00000803u);
  write_be32(out, count);
  write_be32(out, rows);
  write_be32(out, cols);
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_be32(out, 0x00000801u);
  write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
}

Dataset generate(const SyntheticSpec& spec) {
  if (spec.count == 0) throw std::invalid_argument("generate: count must be > 0");
  if (spec.dim == 0) throw std::invalid_argument("generate: dimension must be > 0");
  CounterRng rng(spec.seed, 0x5eed);
  Matrix pts(spec.count, spec.dim);

  if (spec.kind == SyntheticKind::UniformCube) {
    for (double& v : pts.values()) v = rng.uniform(-1.0, 1.0);
    return Dataset{Sample(std::move(pts)), std::nullopt, "synthetic:uniform_cube"};
  }

  if (spec.components.empty()) throw std::invalid_argument("generate: mixture needs components");
  double total = 0.0;
  for (const auto& c : spec.components) {
    if (!(c.weight > 0.0)) throw std::invalid_argument("generate: mixture weights must be positive");
    if (!(c.variance >= 0.0)) throw std::invalid_argument("generate: variances must be >= 0");
    if (c.mean.size() != spec.dim) throw std::invalid_argument("generate: component mean has wrong dimension");
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("generate: mixture weights must sum to 1");

  std::vector<int> labels(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const double u = rng.uniform();
    std::size_t comp = 0;
    double cumulative = spec.components[0].weight;
    while (comp + 1 < spec.components.size() && u >= cumulative) cumulative += spec.components[++comp].weight;
    const auto& c = spec.components[comp];
    const double sd = std::sqrt(c.variance);
    auto row = pts.row(i);
    for (std::size_t q = 0; q < spec.dim; ++q) row[q] = c.mean[q] + sd * rng.normal();
    labels[i] = static_cast<int>(comp);
  }
  return Dataset{Sample(std::move(pts)), std::move(labels), "synthetic:gaussian_mixture"};
}

Sample standard_normal_sample(std::size_t n, std::size_t dim, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.dim = dim;
  spec.count = n;
  spec.seed = seed;
  spec.components = {MixtureComponent{std::vector<double>(dim, 0.0), 1.0, 1.0}};
  return generate(spec).data;
}

Matrix gather_rows(const Matrix& source, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), source.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= source.rows()) throw std::out_of_range("gather_rows: index out of range");
    const auto src = source.row(indices[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

Split train_valid_split(const Dataset& dataset, double valid_fraction, std::uint64_t seed) {
  if (!(valid_fraction > 0.0 && valid_fraction < 1.0)) {
    throw std::invalid_argument("train_valid_split: fraction must be in (0, 1)");
  }
  const std::size_t n = dataset.data.size();
  const auto n_valid = static_cast<std::size_t>(std::llround(static_cast<double>(n) * valid_fraction));
  if (n_valid == 0 || n_valid >= n) {
    throw std::invalid_argument("train_valid_split: both parts must be non-empty (n = " + std::to_string(n) + ")");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  CounterRng rng(seed, 0x5b1f);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  const std::span<const std::size_t> all(perm);
  auto part = [&](std::span<const std::size_t> idx, const char* tag) {
    Dataset d{Sample(gather_rows(dataset.data.points(), idx)), std::nullopt, dataset.source + tag};
    if (dataset.labels) {
      std::vector<int> l;
      l.reserve(idx.size());
      for (auto i : idx) l.push_back((*dataset.labels)[i]);
      d.labels = std::move(l);
    }
    return d;
  };
  return Split{part(all.subspan(n_valid), "#train"), part(all.first(n_valid), "#valid")};
}

}  // namespace cwae::io
