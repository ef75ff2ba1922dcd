#include <algorithm>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "psbc/data.hpp"
#include "psbc/error.hpp"

namespace psbc {
namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset, const char* field) {
  if (bytes.size() < offset + 4) throw ParseError(std::string("truncated header reading ") + field, bytes.size());
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
  const std::uint32_t magic = read_be32(bytes, 0, "magic");
  if (magic != kIdxImageMagic)
    throw ParseError("image file magic is " + std::to_string(magic) + ", expected 2051", 0);
  IdxImages img;
  img.count = read_be32(bytes, 4, "image count");
  img.rows = read_be32(bytes, 8, "row count");
  img.cols = read_be32(bytes, 12, "column count");
  constexpr std::uint64_t limit = std::numeric_limits<std::uint32_t>::max();
  const std::uint64_t per_image = std::uint64_t{img.rows} * img.cols;
  if (img.rows != 0 && per_image / img.rows != img.cols) throw ParseError("image dimensions overflow", 8);
  if (per_image > limit) throw ParseError("image dimensions overflow", 8);
  const std::uint64_t payload = per_image * img.count;
  if (img.count != 0 && payload / img.count != per_image) throw ParseError("image payload size overflows", 4);
  const std::uint64_t available = bytes.size() - 16;
  if (payload > available)
    throw ParseError("truncated image payload: need " + std::to_string(payload) + " bytes, have " +
                         std::to_string(available),
                     bytes.size());
  if (payload < available) throw ParseError("trailing bytes after image payload", 16 + payload);
  img.pixels.assign(bytes.begin() + 16, bytes.end());
  return img;
}

std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  const std::uint32_t magic = read_be32(bytes, 0, "magic");
  if (magic != kIdxLabelMagic)
    throw ParseError("label file magic is " + std::to_string(magic) + ", expected 2049", 0);
  const std::uint32_t count = read_be32(bytes, 4, "label count");
  const std::uint64_t available = bytes.size() - 8;
  if (count > available)
    throw ParseError("truncated label payload: need " + std::to_string(count) + " bytes, have " +
                         std::to_string(available),
                     bytes.size());
  if (count < available) throw ParseError("trailing bytes after label payload", 8 + std::size_t{count});
  std::vector<int> labels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t v = bytes[8 + i];
    if (v > 9) throw ParseError("label byte " + std::to_string(v) + " is not a digit", 8 + i);
    labels[i] = v;
  }
  return labels;
}

IdxImages load_idx_images(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_idx_images(bytes);
}

std::vector<int> load_idx_labels(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_idx_labels(bytes);
}

std::vector<std::uint8_t> encode_idx_images(const IdxImages& images) {
  if (images.pixels.size() != std::size_t{images.count} * images.rows * images.cols)
    throw DimensionError("image payload does not match its header");
  std::vector<std::uint8_t> out;
  out.reserve(16 + images.pixels.size());
  put_be32(out, kIdxImageMagic);
  put_be32(out, images.count);
  put_be32(out, images.rows);
  put_be32(out, images.cols);
  out.insert(out.end(), images.pixels.begin(), images.pixels.end());
  return out;
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const int> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  put_be32(out, kIdxLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  for (int v : labels) {
    if (v < 0 || v > 9) throw DomainError("labels must be digits");
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

Dataset scale_minmax(const IdxImages& images, std::span<const int> labels) {
  if (labels.size() != images.count)
    throw DimensionError("image count " + std::to_string(images.count) + " differs from label count " +
                         std::to_string(labels.size()));
  Dataset ds;
  ds.n_u = static_cast<int>(images.rows * images.cols);
  ds.features.resize(images.pixels.size());
  std::transform(images.pixels.begin(), images.pixels.end(), ds.features.begin(),
                 [](std::uint8_t b) { return static_cast<double>(b) / 255.0; });
  ds.labels.assign(labels.begin(), labels.end());
  return ds;
}

namespace {

Dataset scale_pair(const IdxImages& images, std::span<const int> labels, int a, int b) {
  if (a == b) throw ConfigError("digit pair needs two different digits, got " + std::to_string(a) + " twice");
  if (a < 0 || a > 9 || b < 0 || b > 9) throw ConfigError("digits must lie in 0..9");
  if (labels.size() != images.count) throw DimensionError("image and label counts differ");
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  Dataset ds;
  ds.n_u = static_cast<int>(images.rows * images.cols);
  const auto n_u = static_cast<std::size_t>(ds.n_u);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != lo && labels[i] != hi) continue;
    const std::uint8_t* px = images.pixels.data() + i * n_u;
    for (std::size_t j = 0; j < n_u; ++j) ds.features.push_back(static_cast<double>(px[j]) / 255.0);
    ds.labels.push_back(labels[i] == hi ? 1 : 0);
  }
  return ds;
}

}  // namespace

Dataset MnistSplit::train_dev() const { return scale_minmax(train_images, train_labels); }
Dataset MnistSplit::test() const { return scale_minmax(test_images, test_labels); }
Dataset MnistSplit::train_dev_pair(int a, int b) const { return scale_pair(train_images, train_labels, a, b); }
Dataset MnistSplit::test_pair(int a, int b) const { return scale_pair(test_images, test_labels, a, b); }

MnistSplit load_mnist(const std::filesystem::path& dir) {
  MnistSplit split;
  split.train_images = load_idx_images(dir / "train-images-idx3-ubyte");
  split.train_labels = load_idx_labels(dir / "train-labels-idx1-ubyte");
  split.test_images = load_idx_images(dir / "t10k-images-idx3-ubyte");
  split.test_labels = load_idx_labels(dir / "t10k-labels-idx1-ubyte");
  if (split.train_images.count != split.train_labels.size() || split.test_images.count != split.test_labels.size())
    throw DimensionError("MNIST image and label files disagree in record count");
  return split;
}

}  // namespace psbc
