#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "psbc/data.hpp"
#include "psbc/propagation.hpp"

namespace psbc {

/// Binary classifiers for one digit pair sharing one normalization map.
struct Committee {
  int a = 0;  // low digit, label 0
  int b = 1;  // high digit, label 1
  NormalizationMap normalization;
  std::vector<PsbcModel> members;
};

/// Majority of member predictions on an already normalized input; an exact tie gives 1.
int hard_vote(const Committee& c, std::span<const double> x_normalized);
int majority(std::span<const int> votes);

struct PairVote {
  int a = 0;  // low digit
  int b = 1;  // high digit
  int p = 0;  // committee output: 1 means b
};

/// C_d = sum over pairs containing d of (1 - P) if d is the low digit, else P.
std::array<int, 10> ovo_counts(std::span<const PairVote> votes);
/// Uniform draw among the digits with the highest count.
int ovo_choose(const std::array<int, 10>& counts, std::mt19937_64& rng);

/// Applies every pair's normalization map and committee to a min-max scaled
/// input and aggregates the votes. Throws ConfigError unless all 45 pairs
/// are present exactly once.
int ovo_predict(std::span<const Committee> committees, std::span<const double> x, std::mt19937_64& rng);

/// Rows are true labels, columns predictions.
struct ConfusionMatrix {
  int classes = 2;
  std::vector<long long> counts;

  long long at(int truth, int pred) const {
    return counts[static_cast<std::size_t>(truth) * static_cast<std::size_t>(classes) + static_cast<std::size_t>(pred)];
  }
  long long total() const;
};

ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> labels, int classes);

struct Metrics {
  double accuracy = 0.0;
  double f1 = 0.0;  // binary: label 1 positive; multiclass: unweighted mean over classes
};

/// F1 = 2TP / (2TP + FP + FN); taken as 1 when the denominator is zero.
Metrics metrics(const ConfusionMatrix& cm);

void write_confusion_csv(std::ostream& os, const ConfusionMatrix& cm);

struct PairAccuracy {
  int a = 0;
  int b = 1;
  double accuracy = 0.0;
  std::size_t samples = 0;
};

struct MulticlassReport {
  Metrics overall;
  ConfusionMatrix confusion;
  std::vector<PairAccuracy> pairs;
  std::uint64_t seed = 0;
};

void write_multiclass_report(std::ostream& os, const MulticlassReport& report);

}  // namespace psbc
