#include "absnav/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absnav/errors.hpp"

namespace absnav {
namespace {

constexpr const char* kMagic = "ABSCKPT";

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_doubles(const std::string& line, std::size_t expected,
                                  const char* what) {
  std::vector<double> values;
  values.reserve(expected);
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) break;
    double v = 0.0;
    const auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc()) throw CorruptCheckpoint(std::string("unparsable value in ") + what);
    values.push_back(v);
    p = res.ptr;
  }
  if (values.size() != expected) {
    throw CorruptCheckpoint(std::string(what) + " has " + std::to_string(values.size()) +
                            " values, expected " + std::to_string(expected));
  }
  return values;
}

}  // namespace

void write_checkpoint(const MlpParams& params, std::ostream& out) {
  out << kMagic << " v" << kCheckpointVersion << '\n';
  for (std::size_t i = 0; i < params.layer_dims.size(); ++i) {
    out << (i ? " " : "") << params.layer_dims[i];
  }
  out << '\n';
  for (int l = 0; l < params.num_layers(); ++l) {
    const auto& w = params.weights[l];
    bool first = true;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        out << (first ? "" : " ") << format_double(w(r, c));
        first = false;
      }
    }
    out << '\n';
    const auto& b = params.biases[l];
    for (Eigen::Index r = 0; r < b.size(); ++r) out << (r ? " " : "") << format_double(b(r));
    out << '\n';
  }
}

MlpParams read_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CorruptCheckpoint("empty checkpoint");
  std::istringstream header(line);
  std::string magic, version;
  header >> magic >> version;
  if (magic != kMagic || version.size() < 2 || version[0] != 'v') {
    throw CorruptCheckpoint("missing ABSCKPT header");
  }
  int v = 0;
  const auto res = std::from_chars(version.data() + 1, version.data() + version.size(), v);
  if (res.ec != std::errc()) throw CorruptCheckpoint("bad version tag " + version);
  if (v != kCheckpointVersion) {
    throw FormatVersionMismatch("checkpoint version " + std::to_string(v) + ", reader supports v" +
                                std::to_string(kCheckpointVersion));
  }

  if (!std::getline(in, line)) throw CorruptCheckpoint("missing layer dims");
  std::vector<int> dims;
  {
    std::istringstream ds(line);
    int d = 0;
    while (ds >> d) dims.push_back(d);
    if (!ds.eof()) throw CorruptCheckpoint("unparsable layer dims");
  }
  MlpParams p;
  try {
    p = make_mlp(dims);
  } catch (const DimensionMismatch& e) {
    throw CorruptCheckpoint(std::string("invalid layer dims: ") + e.what());
  }

  for (int l = 0; l < p.num_layers(); ++l) {
    auto& w = p.weights[l];
    if (!std::getline(in, line)) throw CorruptCheckpoint("truncated checkpoint (weights)");
    const auto wv = parse_doubles(line, static_cast<std::size_t>(w.size()), "weights line");
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = wv[k++];
    }
    auto& b = p.biases[l];
    if (!std::getline(in, line)) throw CorruptCheckpoint("truncated checkpoint (biases)");
    const auto bv = parse_doubles(line, static_cast<std::size_t>(b.size()), "biases line");
    for (Eigen::Index r = 0; r < b.size(); ++r) b(r) = bv[static_cast<std::size_t>(r)];
  }
  return p;
}

void save_checkpoint(const MlpParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  write_checkpoint(params, out);
  out.flush();
  if (!out) throw IoFailure("write failed for " + path.string());
}

MlpParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace absnav
