#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "psbc/core.hpp"
#include "psbc/propagation.hpp"

namespace psbc {

/// Row-major feature matrix with one integer label per row.
struct Dataset {
  int n_u = 0;
  Vector features;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * static_cast<std::size_t>(n_u), static_cast<std::size_t>(n_u)};
  }

  /// Throws DimensionError when features and labels disagree in count.
  void check() const;
  Dataset subset(std::span<const std::size_t> indices) const;
  /// First `count` rows (or all when fewer).
  Dataset head(std::size_t count) const;
  /// Views into this dataset; valid while it lives.
  std::vector<Example> examples() const;
  std::vector<Example> examples(std::span<const std::size_t> indices) const;
};

}  // namespace psbc
