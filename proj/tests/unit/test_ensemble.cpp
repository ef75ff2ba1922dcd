#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "psbc/ensemble.hpp"
#include "psbc/error.hpp"

using namespace psbc;

namespace {

// One-feature model that maps the input 1 to a fixed label: x = 1 is a fixed
// point of U, and beta = 1/2 -/+ 2/dt_p sends P from 1/2 to 1 or 0 in one step.
PsbcModel constant_model(int label) {
  Hyperparameters hp;
  hp.n_u = 1;
  hp.n_pt = 1;
  hp.n_t = 1;
  hp.dt_p = hp.dt_star_p = 0.5;
  WeightStack w = WeightStack::filled(hp, 0.5);
  w.w_p[0][0] = label == 1 ? 4.5 : -3.5;
  return PsbcModel::create(hp, w);
}

Committee committee(int a, int b, std::vector<int> votes) {
  Committee c;
  c.a = a;
  c.b = b;
  c.normalization.mu = {0.0};  // input 1 maps to 1
  for (int v : votes) c.members.push_back(constant_model(v));
  return c;
}

}  // namespace

TEST_CASE("constant test models vote as built") {
  CHECK(predict(constant_model(1), Vector{1.0}) == 1);
  CHECK(predict(constant_model(0), Vector{1.0}) == 0);
}

TEST_CASE("hard voting") {
  CHECK(majority(std::vector<int>{1, 1, 0, 1, 1}) == 1);
  CHECK(majority(std::vector<int>{0}) == 0);
  CHECK(majority(std::vector<int>{1, 1, 0, 0}) == 1);
  CHECK(majority(std::vector<int>{0, 0, 1}) == 0);
  CHECK_THROWS_AS(majority(std::vector<int>{}), ConfigError);
  const Vector x{1.0};
  CHECK(hard_vote(committee(0, 1, {0}), x) == 0);
  CHECK(hard_vote(committee(0, 1, {1, 1, 0, 1, 1}), x) == 1);
  CHECK(hard_vote(committee(0, 1, {1, 0}), x) == 1);
  CHECK(hard_vote(committee(0, 1, {0, 0, 0}), x) == 0);
}

TEST_CASE("one-vs-one counts") {
  std::vector<PairVote> votes;
  for (int a = 0; a < 10; ++a)
    for (int b = a + 1; b < 10; ++b) votes.push_back({a, b, b == 7 ? 1 : 0});
  const auto counts = ovo_counts(votes);
  CHECK(counts[7] == 9);
  CHECK(counts[0] == 8);
  std::mt19937_64 rng(1);
  CHECK(ovo_choose(counts, rng) == 7);
}

TEST_CASE("one-vs-one prediction with committees") {
  std::vector<Committee> all;
  for (int a = 0; a < 10; ++a)
    for (int b = a + 1; b < 10; ++b) {
      const int v = (a == 7) ? 0 : (b == 7 ? 1 : 0);
      all.push_back(committee(a, b, {v}));
    }
  std::mt19937_64 rng(3);
  const Vector x{1.0};
  CHECK(ovo_predict(all, x, rng) == 7);
  std::reverse(all.begin(), all.end());
  CHECK(ovo_predict(all, x, rng) == 7);
  all.pop_back();
  CHECK_THROWS_AS(ovo_predict(all, x, rng), ConfigError);
}

TEST_CASE("uniform tie break") {
  std::array<int, 10> counts{};
  counts[2] = 5;
  counts[6] = 5;
  counts[4] = 3;
  std::mt19937_64 rng(4);
  int twos = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const int d = ovo_choose(counts, rng);
    REQUIRE((d == 2 || d == 6));
    twos += d == 2;
  }
  CHECK(std::abs(twos / static_cast<double>(draws) - 0.5) <= 0.02);
  std::mt19937_64 r1(9), r2(9);
  for (int i = 0; i < 100; ++i) CHECK(ovo_choose(counts, r1) == ovo_choose(counts, r2));
}

TEST_CASE("confusion matrix and metrics") {
  const std::vector<int> labels{0, 1, 1, 0};
  auto perfect = metrics(confusion(labels, labels, 2));
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.f1 == 1.0);
  const std::vector<int> wrong{1, 0, 0, 1};
  auto bad = metrics(confusion(wrong, labels, 2));
  CHECK(bad.accuracy == 0.0);
  CHECK(bad.f1 == 0.0);

  std::vector<int> p, l;
  for (int i = 0; i < 8; ++i) p.push_back(1), l.push_back(1);  // TP
  for (int i = 0; i < 2; ++i) p.push_back(1), l.push_back(0);  // FP
  for (int i = 0; i < 2; ++i) p.push_back(0), l.push_back(1);  // FN
  for (int i = 0; i < 8; ++i) p.push_back(0), l.push_back(0);  // TN
  const ConfusionMatrix cm = confusion(p, l, 2);
  CHECK(cm.at(1, 1) == 8);
  CHECK(cm.at(0, 1) == 2);
  CHECK(cm.total() == 20);
  const Metrics m = metrics(cm);
  CHECK(m.accuracy == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(m.f1 == doctest::Approx(0.8).epsilon(1e-15));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> rp(200), rl(200);
    int hits = 0;
    for (int i = 0; i < 200; ++i) {
      rp[i] = static_cast<int>(rng() % 10);
      rl[i] = static_cast<int>(rng() % 10);
      hits += rp[i] == rl[i];
    }
    CHECK(metrics(confusion(rp, rl, 10)).accuracy == doctest::Approx(hits / 200.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(confusion(std::vector<int>{1}, labels, 2), DimensionError);

  std::ostringstream csv;
  write_confusion_csv(csv, cm);
  CHECK(csv.str().find('8') != std::string::npos);
}
