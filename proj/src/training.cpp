#include "psbc/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "psbc/error.hpp"
#include "psbc/gradient.hpp"

namespace psbc {

void TrainConfig::validate() const {
  if (!(lr_u >= 0.0) || !(lr_p >= 0.0) || !std::isfinite(lr_u) || !std::isfinite(lr_p))
    throw ConfigError("learning rates must be finite and non-negative");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw ConfigError("lr_decay must lie in (0, 1]");
  if (decay_every < 1) throw ConfigError("decay_every must be positive");
  if (epochs < 1) throw ConfigError("epochs must be positive");
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  if (patience < 1) throw ConfigError("patience must be positive");
}

WeightStack init_weights(const Hyperparameters& hp, std::uint64_t seed) {
  hp.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.5, 0.1);
  WeightStack w = WeightStack::filled(hp, 0.0);
  for (auto& g : w.w_u)
    for (auto& v : g) v = normal(rng);
  for (auto& g : w.w_p)
    for (auto& v : g) v = normal(rng);
  return w;
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32)};
  for (auto s : stream) {
    words.push_back(static_cast<std::uint32_t>(s));
    words.push_back(static_cast<std::uint32_t>(s >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (std::uint64_t{out[1]} << 32) | out[0];
}

double accuracy(const PsbcModel& model, std::span<const Example> examples) {
  if (examples.empty()) throw DomainError("accuracy of an empty set");
  const LayerCoefficients coeffs = layer_coefficients(model);
  Trajectory traj;
  std::size_t correct = 0;
  for (const auto& ex : examples) {
    forward(model, coeffs, ex.x, traj);
    if (label_from_score(score(model, traj)) == ex.y) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

double accuracy(const PsbcModel& model, const Dataset& ds) {
  const auto ex = ds.examples();
  return accuracy(model, ex);
}

namespace {

void sgd_step(std::vector<Vector>& weights, const std::vector<Vector>& grad, double lr) {
  for (std::size_t k = 0; k < weights.size(); ++k)
    for (std::size_t i = 0; i < weights[k].size(); ++i) weights[k][i] -= lr * grad[k][i];
}

}  // namespace

FitReport fit(PsbcModel& model, std::span<const Example> train, std::span<const Example> eval,
              const TrainConfig& config) {
  config.validate();
  model.validate();
  if (train.empty() || eval.empty()) throw DomainError("fit needs non-empty training and evaluation sets");

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Example> batch;
  batch.reserve(static_cast<std::size_t>(config.batch_size));
  BackwardWorkspace ws;
  // Per-sample losses, summed in dataset order so the epoch cost does not
  // depend on the shuffle.
  Vector sample_loss(train.size());

  IrecResult steps = irec_dt(model);
  model.hp.dt_u = steps.dt_u;
  model.hp.dt_p = steps.dt_p;

  FitReport report;
  report.best_accuracy = -1.0;
  double lr_u = config.lr_u;
  double lr_p = config.lr_p;
  int since_best = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    int batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back(train[order[i]]);
      const std::string where = " (epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch_index) + ")";
      BatchEvaluation ev;
      try {
        ev = evaluate_batch(model, layer_coefficients(model), batch, ws);
      } catch (const PropagationError& e) {
        throw PropagationError(e.what() + where);
      }
      if (!std::isfinite(ev.cost) || !std::isfinite(ev.gradient.max_abs()))
        throw PropagationError("non-finite cost or gradient" + where);
      for (std::size_t i = start; i < stop; ++i) sample_loss[order[i]] = ev.squared_residuals[i - start];
      sgd_step(model.weights.w_u, ev.gradient.g_w_u, lr_u);
      sgd_step(model.weights.w_p, ev.gradient.g_w_p, lr_p);
      steps = irec_dt(model);
      model.hp.dt_u = steps.dt_u;
      model.hp.dt_p = steps.dt_p;
      ++batch_index;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    double loss = 0.0;
    for (double v : sample_loss) loss += v;
    rec.cost = loss / (2.0 * static_cast<double>(train.size()));
    rec.accuracy = accuracy(model, eval);
    rec.dt_u = steps.dt_u;
    rec.dt_p = steps.dt_p;
    rec.diam_alpha = steps.diam_alpha;
    rec.diam_beta = steps.diam_beta;
    report.history.push_back(rec);

    if (rec.accuracy > report.best_accuracy) {
      report.best_accuracy = rec.accuracy;
      report.best_epoch = epoch;
      report.best_weights = model.weights;
      report.best_dt_u = steps.dt_u;
      report.best_dt_p = steps.dt_p;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      report.stopped_early = epoch < config.epochs;
      break;
    }
    if (epoch % config.decay_every == 0) {
      lr_u *= config.lr_decay;
      lr_p *= config.lr_decay;
    }
  }

  model.weights = report.best_weights;
  model.hp.dt_u = report.best_dt_u;
  model.hp.dt_p = report.best_dt_p;
  return report;
}

FitReport fit(PsbcModel& model, const Dataset& train, const Dataset& eval, const TrainConfig& config) {
  train.check();
  eval.check();
  const auto tr = train.examples();
  const auto ev = eval.examples();
  return fit(model, tr, ev, config);
}

void write_history_csv(std::ostream& os, const std::vector<EpochRecord>& history) {
  os << "epoch,cost,accuracy,dt_u,dt_p,diam_alpha,diam_beta\n";
  char buf[256];
  for (const auto& r : history) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.epoch, r.cost, r.accuracy, r.dt_u,
                  r.dt_p, r.diam_alpha, r.diam_beta);
    os << buf;
  }
}

std::vector<Fold> kfold_split(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold split needs k >= 2");
  if (static_cast<std::size_t>(k) > n)
    throw ConfigError("k-fold split needs at least k items (k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                      ")");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t base = n / static_cast<std::size_t>(k);
  const std::size_t extra = n % static_cast<std::size_t>(k);
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  std::size_t start = 0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    folds[f].validation.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                               order.begin() + static_cast<std::ptrdiff_t>(start + len));
    folds[f].train.reserve(n - len);
    folds[f].train.insert(folds[f].train.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(start));
    folds[f].train.insert(folds[f].train.end(), order.begin() + static_cast<std::ptrdiff_t>(start + len),
                          order.end());
    start += len;
  }
  return folds;
}

Hyperparameters with_candidate(Hyperparameters hp, const Candidate& c) {
  hp.dt_star_u = c.dt_star_u;
  hp.dt_star_p = c.dt_star_p;
  hp.dt_u = c.dt_star_u;
  hp.dt_p = c.dt_star_p;
  return hp;
}

namespace {

TrainConfig schedule_for(const TrainConfig& schedule, const Candidate& c, std::uint64_t seed) {
  TrainConfig cfg = schedule;
  cfg.lr_u = c.lr_u;
  cfg.lr_p = c.lr_p;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

GridResult grid_search(const std::vector<Candidate>& grid, const Dataset& data, const Hyperparameters& hp,
                       const BasisMatrix& basis_u, int k, const TrainConfig& schedule, std::uint64_t seed) {
  if (grid.empty()) throw ConfigError("grid search needs at least one candidate");
  data.check();
  const auto folds = kfold_split(data.size(), k, derive_seed(seed, {1}));
  std::vector<std::vector<Example>> train_sets, val_sets;
  for (const auto& f : folds) {
    train_sets.push_back(data.examples(f.train));
    val_sets.push_back(data.examples(f.validation));
  }

  GridResult result;
  for (const auto& c : grid) {
    const Hyperparameters hc = with_candidate(hp, c);
    CandidateScore row;
    row.candidate = c;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      PsbcModel model = PsbcModel::create(hc, basis_u, init_weights(hc, derive_seed(seed, {2, f})));
      const FitReport rep = fit(model, train_sets[f], val_sets[f], schedule_for(schedule, c, derive_seed(seed, {3, f})));
      row.fold_accuracy.push_back(rep.best_accuracy);
    }
    double total = 0.0;
    for (double a : row.fold_accuracy) total += a;
    row.mean_accuracy = total / static_cast<double>(row.fold_accuracy.size());
    result.table.push_back(std::move(row));
  }
  for (std::size_t i = 1; i < result.table.size(); ++i)
    if (result.table[i].mean_accuracy > result.table[result.best].mean_accuracy) result.best = i;
  return result;
}

AssessResult assess(const Hyperparameters& hp, const BasisMatrix& basis_u, const Candidate& best,
                    const Dataset& train_dev, const Dataset& test, int repeats, const TrainConfig& schedule,
                    std::uint64_t seed) {
  if (repeats < 1) throw ConfigError("assess needs at least one repeat");
  train_dev.check();
  test.check();
  const Hyperparameters hc = with_candidate(hp, best);
  const auto train_ex = train_dev.examples();
  const auto test_ex = test.examples();
  AssessResult out;
  for (int r = 0; r < repeats; ++r) {
    const auto ur = static_cast<std::uint64_t>(r);
    PsbcModel model = PsbcModel::create(hc, basis_u, init_weights(hc, derive_seed(seed, {4, ur})));
    out.reports.push_back(fit(model, train_ex, train_ex, schedule_for(schedule, best, derive_seed(seed, {5, ur}))));
    out.accuracies.push_back(accuracy(model, test_ex));
    out.models.push_back(std::move(model));
  }
  double total = 0.0;
  for (double a : out.accuracies) total += a;
  out.mean = total / repeats;
  if (repeats > 1) {
    double ss = 0.0;
    for (double a : out.accuracies) ss += (a - out.mean) * (a - out.mean);
    out.sd = std::sqrt(ss / (repeats - 1));
  }
  return out;
}

}  // namespace psbc
