#include "psbc/pipeline.hpp"

#include <algorithm>
#include <random>

#include "psbc/error.hpp"
#include "psbc/pca.hpp"

namespace psbc {

PairData prepare_pair(const MnistSplit& mnist, int a, int b, std::size_t train_limit, std::size_t test_limit) {
  PairData p;
  p.a = std::min(a, b);
  p.b = std::max(a, b);
  Dataset train = mnist.train_dev_pair(a, b);
  Dataset test = mnist.test_pair(a, b);
  if (train_limit) train = train.head(train_limit);
  if (test_limit) test = test.head(test_limit);
  if (train.empty()) throw DomainError("no training rows for digits " + std::to_string(a) + "," + std::to_string(b));
  p.normalization = fit_normalization(train);
  p.train_dev = p.normalization.apply(train);
  p.test = p.normalization.apply(test);
  return p;
}

BasisMatrix make_basis(BasisChoice choice, const Hyperparameters& hp, const Dataset& train_dev) {
  if (choice == BasisChoice::Canonical) return BasisMatrix::canonical(hp.n_u, hp.n_pt);
  return pca_basis(train_dev, hp.n_pt).to_basis();
}

std::vector<Committee> train_committees(const MnistSplit& mnist, const OvoOptions& opt,
                                        const std::function<void(int, int, double)>& progress) {
  if (opt.members < 1) throw ConfigError("committees need at least one member");
  std::vector<Committee> out;
  for (int a = 0; a < 10; ++a)
    for (int b = a + 1; b < 10; ++b) {
      const PairData pair = prepare_pair(mnist, a, b, opt.per_pair, 0);
      const BasisMatrix basis = make_basis(opt.basis, opt.hp, pair.train_dev);
      const auto pair_seed = derive_seed(opt.seed, {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)});
      Candidate chosen = opt.candidate;
      if (!opt.grid.empty())
        chosen = grid_search(opt.grid, pair.train_dev, opt.hp, basis, opt.folds, opt.grid_schedule,
                             derive_seed(pair_seed, {0}))
                     .best_candidate();
      AssessResult fitted = assess(opt.hp, basis, chosen, pair.train_dev, pair.train_dev, opt.members,
                                   opt.schedule, pair_seed);
      Committee c;
      c.a = a;
      c.b = b;
      c.normalization = pair.normalization;
      c.members = std::move(fitted.models);
      if (progress) progress(a, b, fitted.mean);
      out.push_back(std::move(c));
    }
  return out;
}

MulticlassReport evaluate_multiclass(std::span<const Committee> committees, const Dataset& test, std::size_t limit,
                                     std::uint64_t seed) {
  const std::size_t n = limit ? std::min(limit, test.size()) : test.size();
  if (n == 0) throw DomainError("no test rows");
  std::vector<int> preds(n), labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::mt19937_64 rng(derive_seed(seed, {i}));
    preds[i] = ovo_predict(committees, test.row(i), rng);
    labels[i] = test.labels[i];
  }
  MulticlassReport report;
  report.seed = seed;
  report.confusion = confusion(preds, labels, 10);
  report.overall = metrics(report.confusion);
  // Per-pair accuracy of each committee on the evaluated rows of its two digits.
  for (const auto& c : committees) {
    PairAccuracy pa;
    pa.a = c.a;
    pa.b = c.b;
    std::size_t right = 0;
    Vector xn;
    for (std::size_t i = 0; i < n; ++i) {
      const int y = labels[i];
      if (y != c.a && y != c.b) continue;
      xn = c.normalization.apply(test.row(i));
      ++pa.samples;
      if (hard_vote(c, xn) == (y == c.b ? 1 : 0)) ++right;
    }
    pa.accuracy = pa.samples ? static_cast<double>(right) / static_cast<double>(pa.samples) : 0.0;
    report.pairs.push_back(pa);
  }
  return report;
}

}  // namespace psbc
