#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

#include "psbc/error.hpp"
#include "psbc/model_io.hpp"
#include "psbc/training.hpp"

using namespace psbc;

namespace {

SavedClassifier sample_classifier(BasisKind kind) {
  Hyperparameters hp;
  hp.n_u = 6;
  hp.n_pt = 3;
  hp.n_t = 4;
  hp.shared_k = 2;
  hp.eps = 0.25;
  hp.bc = BoundaryCondition::Periodic;
  hp.dt_u = 0.0731;
  hp.dt_star_u = 0.1;
  hp.dt_p = hp.dt_star_p = 0.2;
  BasisMatrix basis = canonical_basis(6, 3);
  if (kind == BasisKind::Pca) {
    std::mt19937_64 rng(71);
    std::normal_distribution<double> n(0.0, 1.0);
    Vector entries(18);
    for (double& v : entries) v = n(rng);
    basis = BasisMatrix::dense(6, 3, entries);
  }
  SavedClassifier s{PsbcModel::create(hp, basis, init_weights(hp, 5)), NormalizationMap{{0.1, 0.2, 0.3, 0.4, 0.5, 1.0 / 3.0}},
                    std::pair{3, 8}};
  return s;
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("serialization is canonical and faithful") {
  for (auto kind : {BasisKind::Canonical, BasisKind::Pca}) {
    const SavedClassifier s = sample_classifier(kind);
    const std::string text = serialize_model(s);
    const SavedClassifier back = deserialize_model(text);
    CHECK(serialize_model(back) == text);
    CHECK(back.model.weights == s.model.weights);
    CHECK(back.model.basis_u == s.model.basis_u);
    CHECK(back.model.hp.dt_u == s.model.hp.dt_u);
    CHECK(back.normalization->mu == s.normalization->mu);
    CHECK(*back.digits == std::pair{3, 8});
    std::mt19937_64 rng(72);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      Vector x(6);
      for (double& v : x) v = unit(rng);
      CHECK(score(back.model, x) == score(s.model, x));
      CHECK(predict(back.model, x) == predict(s.model, x));
    }
  }
}

TEST_CASE("files round-trip byte for byte") {
  const auto dir = std::filesystem::temp_directory_path() / "psbc_model_io_test";
  std::filesystem::create_directories(dir);
  const SavedClassifier s = sample_classifier(BasisKind::Canonical);
  save_model(s, dir / "a.json");
  save_model(load_model(dir / "a.json"), dir / "b.json");
  CHECK(read_text(dir / "a.json") == read_text(dir / "b.json"));
  CHECK_THROWS(load_model(dir / "missing.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("tampered files name the offending field") {
  const std::string text = serialize_model(sample_classifier(BasisKind::Canonical));
  CHECK_THROWS_WITH_AS(deserialize_model(replace_once(text, "\"n_pt\": 3", "\"n_pt\": 2")),
                       doctest::Contains("hyperparameters.n_pt"), LoadError);
  CHECK_THROWS_WITH_AS(deserialize_model(replace_once(text, "\"n_u\": 6", "\"n_u\": 7")),
                       doctest::Contains("hyperparameters.n_u"), LoadError);
  CHECK_THROWS_WITH_AS(deserialize_model(replace_once(text, "\"n_t\": 4", "\"n_t\": 9")),
                       doctest::Contains("hyperparameters.n_t"), LoadError);
  CHECK_THROWS_WITH_AS(deserialize_model(replace_once(text, "\"format_version\": 1", "\"format_version\": 2")),
                       doctest::Contains("format_version"), LoadError);
  CHECK_THROWS_WITH_AS(deserialize_model(replace_once(text, "\"canonical\"", "\"mystery\"")),
                       doctest::Contains("basis_u.kind"), LoadError);
  CHECK_THROWS_AS(deserialize_model("{ not json"), LoadError);
  CHECK_THROWS_AS(deserialize_model("[]"), LoadError);
}
