#include <algorithm>
#include <string>

#include "psbc/data.hpp"
#include "psbc/error.hpp"

namespace psbc {

Dataset select_pair(const Dataset& ds, int a, int b) {
  if (a == b) throw ConfigError("digit pair needs two different digits, got " + std::to_string(a) + " twice");
  if (a < 0 || a > 9 || b < 0 || b > 9) throw ConfigError("digits must lie in 0..9");
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  Dataset out;
  out.n_u = ds.n_u;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const int label = ds.labels[i];
    if (label != lo && label != hi) continue;
    const auto r = ds.row(i);
    out.features.insert(out.features.end(), r.begin(), r.end());
    out.labels.push_back(label == hi ? 1 : 0);
  }
  return out;
}

NormalizationMap fit_normalization(const Dataset& train) {
  if (train.empty()) throw DomainError("normalization needs a non-empty training set");
  const auto n_u = static_cast<std::size_t>(train.n_u);
  NormalizationMap map;
  map.mu.assign(n_u, 0.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto r = train.row(i);
    for (std::size_t j = 0; j < n_u; ++j) map.mu[j] += r[j];
  }
  const double n = static_cast<double>(train.size());
  for (auto& v : map.mu) v /= n;
  return map;
}

void NormalizationMap::apply_inplace(std::span<double> x) const {
  if (x.size() != mu.size())
    throw DimensionError("normalization expects length " + std::to_string(mu.size()) + ", got " +
                         std::to_string(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = 0.5 + 0.5 * (x[j] - mu[j]);
}

Vector NormalizationMap::apply(std::span<const double> x) const {
  Vector out(x.begin(), x.end());
  apply_inplace(out);
  return out;
}

Dataset NormalizationMap::apply(const Dataset& ds) const {
  Dataset out = ds;
  const auto n_u = static_cast<std::size_t>(ds.n_u);
  for (std::size_t i = 0; i < ds.size(); ++i) apply_inplace(std::span<double>(out.features.data() + i * n_u, n_u));
  return out;
}

}  // namespace psbc
