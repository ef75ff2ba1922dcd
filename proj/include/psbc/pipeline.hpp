#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "psbc/data.hpp"
#include "psbc/ensemble.hpp"
#include "psbc/training.hpp"

namespace psbc {

/// One digit pair, relabelled and normalized with the map fitted on its
/// train-development rows.
struct PairData {
  int a = 0;
  int b = 1;
  NormalizationMap normalization;
  Dataset train_dev;
  Dataset test;
};

/// `train_limit` / `test_limit` keep only the first rows of each split (0 keeps all).
PairData prepare_pair(const MnistSplit& mnist, int a, int b, std::size_t train_limit = 0, std::size_t test_limit = 0);

enum class BasisChoice { Canonical, Pca };

/// Canonical basis or PCA components of the pair's normalized train-development rows.
BasisMatrix make_basis(BasisChoice choice, const Hyperparameters& hp, const Dataset& train_dev);

struct OvoOptions {
  Hyperparameters hp;
  BasisChoice basis = BasisChoice::Canonical;
  Candidate candidate;
  TrainConfig schedule;
  int members = 1;
  std::size_t per_pair = 0;  // training rows per pair (0 = all)
  std::uint64_t seed = 0;
  // When non-empty, each pair selects its own candidate by k-fold grid search
  // and `candidate` is ignored.
  std::vector<Candidate> grid;
  int folds = 5;
  TrainConfig grid_schedule;
};

/// Trains all 45 pair committees. `progress` (optional) is called after each
/// pair with the committee's mean train-development accuracy.
std::vector<Committee> train_committees(const MnistSplit& mnist, const OvoOptions& opt,
                                        const std::function<void(int, int, double)>& progress = {});

/// Scores the committees on the first `limit` test rows (0 = all); sample i
/// breaks vote ties with its own stream derived from `seed`.
MulticlassReport evaluate_multiclass(std::span<const Committee> committees, const Dataset& test, std::size_t limit,
                                     std::uint64_t seed);

}  // namespace psbc
