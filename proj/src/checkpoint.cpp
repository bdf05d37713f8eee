#include "cwae/checkpoint.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "cwae/data_io.hpp"

namespace cwae::nn {
namespace {

constexpr std::array<char, 8> kMagic{'C', 'W', 'A', 'E', 'C', 'K', 'P', 'T'};

template <class UInt>
void put(std::ostream& out, UInt v) {
  std::array<char, sizeof(UInt)> b{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

template <class UInt>
UInt get(std::istream& in) {
  std::array<unsigned char, sizeof(UInt)> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw io::FormatError("checkpoint: truncated");
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(b[i]) << (8 * i);
  return v;
}

std::uint32_t activation_code(Activation a) {
  switch (a) {
    case Activation::ReLU:
      return 0;
    case Activation::Identity:
      return 1;
    case Activation::Sigmoid:
      return 2;
  }
  return 1;
}

Activation activation_from(std::uint32_t code) {
  switch (code) {
    case 0:
      return Activation::ReLU;
    case 1:
      return Activation::Identity;
    case 2:
      return Activation::Sigmoid;
    default:
      throw io::FormatError("checkpoint: unknown activation code " + std::to_string(code));
  }
}

void put_doubles(std::ostream& out, std::span<const double> values) {
  for (double v : values) put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

void get_doubles(std::istream& in, std::span<double> values) {
  for (double& v : values) v = std::bit_cast<double>(get<std::uint64_t>(in));
}

// Guards allocation against corrupt size fields.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 32;

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const MlpParams& params, const std::string& config_text) {
  params.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, activation_code(params.hidden));
  put<std::uint32_t>(out, activation_code(params.output));
  put<std::uint64_t>(out, config_text.size());
  out.write(config_text.data(), static_cast<std::streamsize>(config_text.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.encoder.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.decoder.size()));
  for (const auto* stack : {&params.encoder, &params.decoder}) {
    for (const auto& layer : *stack) {
      put<std::uint64_t>(out, layer.weight.rows());
      put<std::uint64_t>(out, layer.weight.cols());
      put_doubles(out, layer.weight.values());
      put_doubles(out, layer.bias);
    }
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw io::FormatError("checkpoint: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw io::FormatError("checkpoint: unsupported version " + std::to_string(version));
  }
  Checkpoint ck;
  ck.params.hidden = activation_from(get<std::uint32_t>(in));
  ck.params.output = activation_from(get<std::uint32_t>(in));
  const auto text_len = get<std::uint64_t>(in);
  if (text_len > kMaxElements) throw io::FormatError("checkpoint: config text too large");
  ck.config_text.resize(text_len);
  if (!in.read(ck.config_text.data(), static_cast<std::streamsize>(text_len))) {
    throw io::FormatError("checkpoint: truncated");
  }
  const auto n_enc = get<std::uint32_t>(in);
  const auto n_dec = get<std::uint32_t>(in);
  for (auto [stack, count] : {std::pair{&ck.params.encoder, n_enc}, std::pair{&ck.params.decoder, n_dec}}) {
    for (std::uint32_t l = 0; l < count; ++l) {
      const auto rows = get<std::uint64_t>(in);
      const auto cols = get<std::uint64_t>(in);
      if (rows == 0 || cols == 0 || rows > kMaxElements / cols) throw io::FormatError("checkpoint: bad layer shape");
      DenseLayer layer{Matrix(rows, cols), std::vector<double>(rows)};
      get_doubles(in, layer.weight.values());
      get_doubles(in, layer.bias);
      stack->push_back(std::move(layer));
    }
  }
  ck.params.validate();
  return ck;
}

void write_records_csv(const std::filesystem::path& path, std::span<const TrainRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "epoch,rec_error,cw_pre_log,cw_post_log,skewness,kurtosis,normalized_kurtosis\n";
  std::array<char, 32> buf{};
  auto num = [&](double v) {
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    out << ',';
    out.write(buf.data(), res.ptr - buf.data());
  };
  for (const auto& r : records) {
    out << r.epoch;
    num(r.reconstruction_error);
    num(r.cw_pre_log);
    num(r.cw_post_log);
    num(r.mardia.skewness);
    num(r.mardia.kurtosis);
    num(r.mardia.normalized_kurtosis);
    out << '\n';
  }
}

}  // namespace cwae::nn
