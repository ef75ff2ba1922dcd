#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include "psbc/core.hpp"
#include "psbc/dataset.hpp"
#include "psbc/propagation.hpp"

namespace psbc {

struct TrainConfig {
  double lr_u = 0.1;
  double lr_p = 0.1;
  double lr_decay = 0.5;
  int decay_every = 5;
  int epochs = 20;
  int batch_size = 32;
  int patience = 10;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

struct EpochRecord {
  int epoch = 0;          // 1-based
  double cost = 0.0;      // training cost with each sample's loss taken when its minibatch was evaluated
  double accuracy = 0.0;  // monitored accuracy on the evaluation set
  double dt_u = 0.0;
  double dt_p = 0.0;
  double diam_alpha = 1.0;
  double diam_beta = 1.0;
};

struct FitReport {
  WeightStack best_weights;
  int best_epoch = 0;
  double best_accuracy = 0.0;
  double best_dt_u = 0.0;
  double best_dt_p = 0.0;
  std::vector<EpochRecord> history;
  bool stopped_early = false;
};

/// Every coordinate i.i.d. Normal(0.5, 0.1^2) from a seeded mt19937_64.
WeightStack init_weights(const Hyperparameters& hp, std::uint64_t seed);

/// Minibatch SGD with separate rates for the two equations, step-size
/// recomputation after each batch, step decay of the rates and early stopping
/// on evaluation accuracy. On return `model` holds the best weights and the
/// step sizes that went with them.
FitReport fit(PsbcModel& model, std::span<const Example> train, std::span<const Example> eval,
              const TrainConfig& config);
FitReport fit(PsbcModel& model, const Dataset& train, const Dataset& eval, const TrainConfig& config);

/// Fraction of examples whose prediction equals the label.
double accuracy(const PsbcModel& model, std::span<const Example> examples);
double accuracy(const PsbcModel& model, const Dataset& ds);

void write_history_csv(std::ostream& os, const std::vector<EpochRecord>& history);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Seeded shuffle into k near-equal folds (the first n mod k folds are one larger).
std::vector<Fold> kfold_split(std::size_t n, int k, std::uint64_t seed);

struct Candidate {
  double lr_u = 0.1;
  double lr_p = 0.1;
  double dt_star_u = 0.1;
  double dt_star_p = 0.1;
};

struct CandidateScore {
  Candidate candidate;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
};

struct GridResult {
  std::size_t best = 0;
  std::vector<CandidateScore> table;
  const Candidate& best_candidate() const { return table[best].candidate; }
};

/// Deterministic seed for a (base, stream...) tuple.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> stream);

/// Hyperparameters for a candidate: its ceilings, with the live steps starting there.
Hyperparameters with_candidate(Hyperparameters hp, const Candidate& c);

/// k-fold cross-validated score of every candidate: the mean over folds of
/// the best validation accuracy reached within `schedule.epochs`. Folds and
/// initial weights depend only on `seed` and the fold, so candidates are
/// compared on identical splits. Ties go to the earlier candidate.
GridResult grid_search(const std::vector<Candidate>& grid, const Dataset& data, const Hyperparameters& hp,
                       const BasisMatrix& basis_u, int k, const TrainConfig& schedule, std::uint64_t seed);

struct AssessResult {
  std::vector<double> accuracies;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single repeat
  std::vector<PsbcModel> models;
  std::vector<FitReport> reports;
};

/// Retrains `repeats` times from fresh initializations on all of
/// `train_dev` (monitoring its accuracy) and scores each fit on `test`.
AssessResult assess(const Hyperparameters& hp, const BasisMatrix& basis_u, const Candidate& best,
                    const Dataset& train_dev, const Dataset& test, int repeats, const TrainConfig& schedule,
                    std::uint64_t seed);

}  // namespace psbc
