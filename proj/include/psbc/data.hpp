#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "psbc/dataset.hpp"

namespace psbc {

inline constexpr std::uint32_t kIdxImageMagic = 2051;
inline constexpr std::uint32_t kIdxLabelMagic = 2049;

struct IdxImages {
  std::uint32_t count = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> pixels;  // count x (rows * cols), row-major
};

// Parsers throw ParseError carrying the byte offset of the problem.
IdxImages parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes);
IdxImages load_idx_images(const std::filesystem::path& path);
std::vector<int> load_idx_labels(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_idx_images(const IdxImages& images);
std::vector<std::uint8_t> encode_idx_labels(std::span<const int> labels);

/// Divides every byte by 255; labels are attached unchanged.
Dataset scale_minmax(const IdxImages& images, std::span<const int> labels);

/// Rows whose label is a or b, relabelled min(a, b) -> 0 and max(a, b) -> 1.
Dataset select_pair(const Dataset& ds, int a, int b);

/// x -> 1/2 + (x - mu) / 2 with mu the training mean.
struct NormalizationMap {
  Vector mu;

  Vector apply(std::span<const double> x) const;
  void apply_inplace(std::span<double> x) const;
  Dataset apply(const Dataset& ds) const;
};

NormalizationMap fit_normalization(const Dataset& train);

/// Raw bytes of the 70000 records: the first 60000 are train-development,
/// the last 10000 test. Rows are scaled to [0, 1] only when extracted.
struct MnistSplit {
  IdxImages train_images;
  std::vector<int> train_labels;
  IdxImages test_images;
  std::vector<int> test_labels;

  Dataset train_dev() const;
  Dataset test() const;
  /// select_pair(scale_minmax(...), a, b) without scaling the other digits.
  Dataset train_dev_pair(int a, int b) const;
  Dataset test_pair(int a, int b) const;
};

/// Reads the four standard MNIST files from `dir`.
MnistSplit load_mnist(const std::filesystem::path& dir);

}  // namespace psbc
