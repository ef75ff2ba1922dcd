#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "psbc/training.hpp"

namespace psbc {

/// Grid and schedule settings, read from a `key = value` text file.
///
///   # comment
///   lr_u = 0.1, 0.3, 1, 3
///   lr_p = 0.1, 0.3, 1, 3
///   dt = 0.1, 0.2          # shared ceiling; or dt_u / dt_p separately
///   epochs_grid = 10
///   epochs_final = 20
///   lr_decay = 0.5
///   decay_every = 5
///   batch_size = 32
///   patience = 10
///   folds = 5
struct GridConfig {
  std::vector<double> lr_u{0.1, 0.3, 1.0, 3.0};
  std::vector<double> lr_p{0.1, 0.3, 1.0, 3.0};
  // Empty dt_p means "same as dt_u" (one shared ceiling per candidate).
  std::vector<double> dt_u{0.1, 0.2};
  std::vector<double> dt_p;
  int epochs_grid = 10;
  int epochs_final = 20;
  double lr_decay = 0.5;
  int decay_every = 5;
  int batch_size = 32;
  int patience = 10;
  int folds = 5;

  /// Candidates in lr_u-major order, then lr_p, then dt.
  std::vector<Candidate> candidates() const;
  TrainConfig schedule(int epochs) const;
  void validate() const;
};

/// Throws ConfigError naming the line on unknown keys or bad values.
GridConfig parse_grid_config(std::string_view text);
GridConfig load_grid_config(const std::filesystem::path& path);
std::string format_grid_config(const GridConfig& cfg);

}  // namespace psbc
