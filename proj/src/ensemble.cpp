#include "psbc/ensemble.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "psbc/error.hpp"

namespace psbc {

int majority(std::span<const int> votes) {
  if (votes.empty()) throw ConfigError("empty committee");
  std::size_t ones = 0;
  for (int v : votes) ones += v == 1 ? 1 : 0;
  return 2 * ones >= votes.size() ? 1 : 0;
}

int hard_vote(const Committee& c, std::span<const double> x_normalized) {
  if (c.members.empty()) throw ConfigError("empty committee");
  std::vector<int> votes;
  votes.reserve(c.members.size());
  for (const auto& m : c.members) votes.push_back(predict(m, x_normalized));
  return majority(votes);
}

std::array<int, 10> ovo_counts(std::span<const PairVote> votes) {
  std::array<int, 10> c{};
  for (const auto& v : votes) {
    if (v.a < 0 || v.b > 9 || v.a >= v.b) throw ConfigError("pair votes need digits a < b in 0..9");
    c[static_cast<std::size_t>(v.a)] += 1 - v.p;
    c[static_cast<std::size_t>(v.b)] += v.p;
  }
  return c;
}

int ovo_choose(const std::array<int, 10>& counts, std::mt19937_64& rng) {
  const int top = *std::max_element(counts.begin(), counts.end());
  std::vector<int> leaders;
  for (int d = 0; d < 10; ++d)
    if (counts[static_cast<std::size_t>(d)] == top) leaders.push_back(d);
  if (leaders.size() == 1) return leaders[0];
  std::uniform_int_distribution<std::size_t> pick(0, leaders.size() - 1);
  return leaders[pick(rng)];
}

int ovo_predict(std::span<const Committee> committees, std::span<const double> x, std::mt19937_64& rng) {
  std::array<std::array<const Committee*, 10>, 10> table{};
  for (const auto& c : committees) {
    if (c.a < 0 || c.b > 9 || c.a >= c.b) throw ConfigError("committee digits must satisfy 0 <= a < b <= 9");
    auto& slot = table[static_cast<std::size_t>(c.a)][static_cast<std::size_t>(c.b)];
    if (slot) throw ConfigError("duplicate committee for pair (" + std::to_string(c.a) + "," + std::to_string(c.b) + ")");
    slot = &c;
  }
  std::vector<PairVote> votes;
  votes.reserve(45);
  Vector xn;
  for (int a = 0; a < 10; ++a)
    for (int b = a + 1; b < 10; ++b) {
      const Committee* c = table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (!c) throw ConfigError("missing committee for pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
      xn = c->normalization.apply(x);
      votes.push_back({a, b, hard_vote(*c, xn)});
    }
  return ovo_choose(ovo_counts(votes), rng);
}

long long ConfusionMatrix::total() const {
  long long t = 0;
  for (auto v : counts) t += v;
  return t;
}

ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> labels, int classes) {
  if (preds.size() != labels.size()) throw DimensionError("predictions and labels differ in length");
  if (classes < 2) throw ConfigError("confusion matrix needs at least two classes");
  ConfusionMatrix cm;
  cm.classes = classes;
  cm.counts.assign(static_cast<std::size_t>(classes) * static_cast<std::size_t>(classes), 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] < 0 || preds[i] >= classes || labels[i] < 0 || labels[i] >= classes)
      throw DomainError("label outside 0.." + std::to_string(classes - 1));
    ++cm.counts[static_cast<std::size_t>(labels[i]) * static_cast<std::size_t>(classes) +
                static_cast<std::size_t>(preds[i])];
  }
  return cm;
}

namespace {

double f1_for(const ConfusionMatrix& cm, int positive) {
  long long tp = cm.at(positive, positive);
  long long fp = 0;
  long long fn = 0;
  for (int k = 0; k < cm.classes; ++k) {
    if (k == positive) continue;
    fp += cm.at(k, positive);
    fn += cm.at(positive, k);
  }
  const long long denom = 2 * tp + fp + fn;
  return denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

Metrics metrics(const ConfusionMatrix& cm) {
  Metrics m;
  const long long total = cm.total();
  long long diag = 0;
  for (int k = 0; k < cm.classes; ++k) diag += cm.at(k, k);
  m.accuracy = total == 0 ? 0.0 : static_cast<double>(diag) / static_cast<double>(total);
  if (cm.classes == 2) {
    m.f1 = f1_for(cm, 1);
  } else {
    double s = 0.0;
    for (int k = 0; k < cm.classes; ++k) s += f1_for(cm, k);
    m.f1 = s / cm.classes;
  }
  return m;
}

void write_confusion_csv(std::ostream& os, const ConfusionMatrix& cm) {
  os << "truth\\pred";
  for (int p = 0; p < cm.classes; ++p) os << ',' << p;
  os << '\n';
  for (int t = 0; t < cm.classes; ++t) {
    os << t;
    for (int p = 0; p < cm.classes; ++p) os << ',' << cm.at(t, p);
    os << '\n';
  }
}

void write_multiclass_report(std::ostream& os, const MulticlassReport& report) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "accuracy: %.6f\nf1_macro: %.6f\nsamples: %lld\nseed: %llu\n",
                report.overall.accuracy, report.overall.f1, report.confusion.total(),
                static_cast<unsigned long long>(report.seed));
  os << buf;
  os << "pairs:\n";
  for (const auto& p : report.pairs) {
    std::snprintf(buf, sizeof buf, "  %d,%d: accuracy %.6f over %zu samples\n", p.a, p.b, p.accuracy, p.samples);
    os << buf;
  }
  os << "confusion:\n";
  write_confusion_csv(os, report.confusion);
}

}  // namespace psbc
