#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "psbc/data.hpp"
#include "psbc/propagation.hpp"

namespace psbc {

inline constexpr int kModelFormatVersion = 1;

/// A trained classifier together with what is needed to apply it to raw
/// min-max scaled inputs.
struct SavedClassifier {
  PsbcModel model;
  std::optional<NormalizationMap> normalization;
  std::optional<std::pair<int, int>> digits;  // (low, high)
};

/// Canonical JSON: fixed key order, two-space indentation, numbers with 17
/// significant digits. Equal inputs give byte-identical text.
std::string serialize_model(const SavedClassifier& saved);
/// Throws LoadError naming the offending field.
SavedClassifier deserialize_model(std::string_view text);

void save_model(const SavedClassifier& saved, const std::filesystem::path& path);
SavedClassifier load_model(const std::filesystem::path& path);

/// Writes through a temporary file in the same directory and renames it into place.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace psbc
