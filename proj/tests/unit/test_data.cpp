#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>

#include "psbc/data.hpp"
#include "psbc/error.hpp"

using namespace psbc;

namespace {

std::vector<std::uint8_t> bytes(std::initializer_list<int> v) {
  std::vector<std::uint8_t> out;
  for (int b : v) out.push_back(static_cast<std::uint8_t>(b));
  return out;
}

}  // namespace

TEST_CASE("IDX image header is big-endian") {
  auto header = bytes({0, 0, 8, 3, 0, 0, 0xEA, 0x60, 0, 0, 0, 0x1C, 0, 0, 0, 0x1C});
  header.resize(16 + 60000u * 784u, 0);
  const IdxImages img = parse_idx_images(header);
  CHECK(img.count == 60000);
  CHECK(img.rows == 28);
  CHECK(img.cols == 28);
}

TEST_CASE("IDX image fixtures") {
  const auto file = bytes({0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 0, 51, 200, 255});
  const IdxImages img = parse_idx_images(file);
  CHECK(img.count == 1);
  CHECK(img.pixels == bytes({0, 51, 200, 255}));
  CHECK(encode_idx_images(img) == file);

  auto wrong_magic = file;
  wrong_magic[3] = 1;
  CHECK_THROWS_AS(parse_idx_images(wrong_magic), ParseError);
  try {
    parse_idx_images(wrong_magic);
  } catch (const ParseError& e) {
    CHECK(e.offset() == 0);
  }
  auto truncated = file;
  truncated.pop_back();
  CHECK_THROWS_AS(parse_idx_images(truncated), ParseError);
  auto trailing = file;
  trailing.push_back(0);
  CHECK_THROWS_AS(parse_idx_images(trailing), ParseError);
  CHECK_THROWS_AS(parse_idx_images(bytes({0, 0, 8, 3, 0, 0})), ParseError);
}

TEST_CASE("IDX label fixtures") {
  const auto file = bytes({0, 0, 8, 1, 0, 0, 0, 3, 7, 0, 1});
  CHECK(parse_idx_labels(file) == std::vector<int>{7, 0, 1});
  const std::vector<int> labels{7, 0, 1};
  CHECK(encode_idx_labels(labels) == file);
  CHECK(parse_idx_labels(bytes({0, 0, 8, 1, 0, 0, 0, 0})).empty());
  CHECK_THROWS_AS(parse_idx_labels(bytes({0, 0, 8, 1, 0, 0, 0, 4, 7, 0, 1})), ParseError);
  CHECK_THROWS_AS(parse_idx_labels(bytes({0, 0, 8, 1, 0, 0, 0, 1, 10})), ParseError);
  CHECK_THROWS_AS(parse_idx_labels(bytes({0, 0, 8, 3, 0, 0, 0, 0})), ParseError);
}

TEST_CASE("IDX files round-trip through disk") {
  std::mt19937_64 rng(61);
  IdxImages img;
  img.count = 5;
  img.rows = 3;
  img.cols = 4;
  for (int i = 0; i < 60; ++i) img.pixels.push_back(static_cast<std::uint8_t>(rng() & 0xFF));
  const auto dir = std::filesystem::temp_directory_path() / "psbc_idx_test";
  std::filesystem::create_directories(dir);
  const auto enc = encode_idx_images(img);
  std::ofstream(dir / "img", std::ios::binary).write(reinterpret_cast<const char*>(enc.data()),
                                                     static_cast<std::streamsize>(enc.size()));
  const IdxImages back = load_idx_images(dir / "img");
  CHECK(back.pixels == img.pixels);
  CHECK(back.rows == 3);
  CHECK_THROWS(load_idx_images(dir / "missing"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("min-max scaling") {
  IdxImages img;
  img.count = 1;
  img.rows = 1;
  img.cols = 3;
  img.pixels = bytes({0, 51, 255});
  const std::vector<int> labels{4};
  const Dataset ds = scale_minmax(img, labels);
  CHECK(ds.n_u == 3);
  CHECK(ds.features == Vector{0.0, 0.2, 1.0});
  for (int b = 0; b < 256; ++b) {
    img.pixels = {static_cast<std::uint8_t>(b), 0, 0};
    const double v = scale_minmax(img, labels).features[0];
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("digit pair selection") {
  Dataset ds;
  ds.n_u = 1;
  ds.features = {0.0, 0.1, 0.2, 0.3, 0.4};
  ds.labels = {1, 4, 0, 9, 4};
  const Dataset p01 = select_pair(ds, 0, 1);
  CHECK(p01.labels == std::vector<int>{1, 0});
  CHECK(p01.features == Vector{0.0, 0.2});
  const Dataset a = select_pair(ds, 9, 4);
  const Dataset b = select_pair(ds, 4, 9);
  CHECK(a.labels == b.labels);
  CHECK(a.features == b.features);
  CHECK(a.labels == std::vector<int>{0, 1, 0});
  CHECK(select_pair(ds, 2, 3).empty());
  CHECK_THROWS_AS(select_pair(ds, 3, 3), ConfigError);
}

TEST_CASE("normalization map") {
  Dataset train;
  train.n_u = 2;
  train.features = {0.25, 0.0, 0.75, 0.5};
  train.labels = {0, 1};
  const NormalizationMap map = fit_normalization(train);
  CHECK(map.mu == Vector{0.5, 0.25});
  CHECK(map.apply(map.mu) == Vector{0.5, 0.5});
  CHECK(map.apply(Vector{1.5, 1.25}) == Vector{1.0, 1.0});
  // Training mean maps to one half.
  const Dataset n = map.apply(train);
  CHECK((n.features[0] + n.features[2]) / 2 == 0.5);
  CHECK_THROWS_AS(fit_normalization(Dataset{}), DomainError);
  CHECK_THROWS_AS(map.apply(Vector{0.5}), DimensionError);

  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    NormalizationMap m{{unit(rng), unit(rng), unit(rng)}};
    for (double v : m.apply(Vector{unit(rng), unit(rng), unit(rng)})) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    // Affine on dyadic inputs, where every operation is exact.
    const auto dy = [&] { return static_cast<double>(rng() % 257) / 256.0; };
    NormalizationMap d{{dy(), dy()}};
    const Vector x{dy(), dy()}, y{dy(), dy()};
    const Vector mid{(x[0] + y[0]) / 2, (x[1] + y[1]) / 2};
    const Vector nx = d.apply(x), ny = d.apply(y), nm = d.apply(mid);
    for (int j = 0; j < 2; ++j) CHECK(nm[j] == (nx[j] + ny[j]) / 2);
  }
}
