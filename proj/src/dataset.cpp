#include "psbc/dataset.hpp"

#include <algorithm>
#include <string>

#include "psbc/error.hpp"

namespace psbc {

void Dataset::check() const {
  if (n_u < 1 && !labels.empty()) throw DimensionError("dataset has no feature dimension");
  if (features.size() != labels.size() * static_cast<std::size_t>(std::max(n_u, 0)))
    throw DimensionError("dataset holds " + std::to_string(features.size()) + " feature values for " +
                         std::to_string(labels.size()) + " labels of dimension " + std::to_string(n_u));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.n_u = n_u;
  out.labels.reserve(indices.size());
  out.features.reserve(indices.size() * static_cast<std::size_t>(n_u));
  for (std::size_t i : indices) {
    if (i >= size()) throw DimensionError("dataset index " + std::to_string(i) + " out of range");
    const auto r = row(i);
    out.features.insert(out.features.end(), r.begin(), r.end());
    out.labels.push_back(labels[i]);
  }
  return out;
}

Dataset Dataset::head(std::size_t count) const {
  count = std::min(count, size());
  Dataset out;
  out.n_u = n_u;
  out.labels.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(count));
  out.features.assign(features.begin(), features.begin() + static_cast<std::ptrdiff_t>(count * n_u));
  return out;
}

std::vector<Example> Dataset::examples() const {
  std::vector<Example> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back({row(i), labels[i]});
  return out;
}

std::vector<Example> Dataset::examples(std::span<const std::size_t> indices) const {
  std::vector<Example> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw DimensionError("dataset index " + std::to_string(i) + " out of range");
    out.push_back({row(i), labels[i]});
  }
  return out;
}

}  // namespace psbc
