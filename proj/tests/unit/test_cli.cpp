#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "psbc/model_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = psbc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool have_mnist() { return fs::exists(fs::path(PSBC_TEST_DATA_DIR) / "train-images-idx3-ubyte"); }

std::size_t count(const std::string& s, char c) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), c)); }

}  // namespace

TEST_CASE("simulate emits the full trajectory") {
  const Outcome o = run({"simulate", "--alpha", "parabola", "--nu", "20", "--nt", "300", "--dt", "0.1", "--eps", "0.3"});
  REQUIRE(o.code == 0);
  CHECK(count(o.out, '\n') == 301);
  const std::string first = o.out.substr(0, o.out.find('\n'));
  CHECK(count(first, ',') == 19);
  CHECK(o.err.find("alpha = parabola") != std::string::npos);
  // Identical arguments give identical output.
  CHECK(run({"simulate", "--alpha", "parabola"}).out == run({"simulate", "--alpha", "parabola"}).out);
}

TEST_CASE("user errors exit with code 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"simulate", "--bogus"}).code == 1);
  CHECK(run({"simulate", "--alpha", "zigzag"}).code == 1);
  CHECK(run({"simulate", "--bc", "periodic", "--nu", "2"}).code == 1);
  CHECK(run({"train", "--digits", "4,4", "--out", "x.json", "--data-dir", "/nonexistent"}).code == 1);
  CHECK(run({"ingest", "--data-dir", "/nonexistent"}).code == 1);
  CHECK(run({"multiclass", "--models", "/nonexistent", "--data-dir", "/nonexistent"}).code == 1);
  const Outcome help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("verify reports every suite") {
  const Outcome o = run({"verify", "--scale", "0.01", "--seed", "3"});
  CHECK(o.code == 0);
  CHECK(o.out.find("suites passed 10/10") != std::string::npos);
  CHECK(o.out.find("FAIL") == std::string::npos);
  CHECK(o.err.find("seed = 3") != std::string::npos);
  CHECK(run({"verify", "--scale", "2"}).code == 1);
}

TEST_CASE("train writes a loadable model and a history") {
  if (!have_mnist()) {
    MESSAGE("MNIST files not found; skipping");
    return;
  }
  const fs::path dir = fs::temp_directory_path() / "psbc_cli_train";
  fs::remove_all(dir);
  const std::string model = (dir / "m.json").string();
  const std::vector<std::string> args{"train", "--digits", "1,0", "--train-limit", "300", "--test-limit", "200",
                                      "--epochs", "2", "--lr-u", "3", "--lr-p", "3", "--seed", "4",
                                      "--out", model, "--data-dir", PSBC_TEST_DATA_DIR};
  const Outcome o = run(args);
  REQUIRE(o.code == 0);
  CHECK(o.out.find("test_accuracy") != std::string::npos);
  const auto saved = psbc::load_model(model);
  CHECK(saved.digits == std::pair{0, 1});
  CHECK(saved.normalization.has_value());
  const std::string history = psbc::read_text(model + ".history.csv");
  CHECK(count(history, '\n') == 3);
  const std::string first = psbc::read_text(model);
  REQUIRE(run(args).code == 0);
  CHECK(psbc::read_text(model) == first);
  fs::remove_all(dir);
}

TEST_CASE("ingest counts the records") {
  if (!have_mnist()) {
    MESSAGE("MNIST files not found; skipping");
    return;
  }
  const Outcome o = run({"ingest", "--data-dir", PSBC_TEST_DATA_DIR});
  REQUIRE(o.code == 0);
  CHECK(o.out.find("train_dev,60000,28,28") != std::string::npos);
  CHECK(o.out.find("test,10000,28,28") != std::string::npos);
}
