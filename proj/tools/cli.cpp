#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "psbc/checks/suites.hpp"
#include "psbc/config.hpp"
#include "psbc/data.hpp"
#include "psbc/ensemble.hpp"
#include "psbc/error.hpp"
#include "psbc/model_io.hpp"
#include "psbc/pipeline.hpp"
#include "psbc/training.hpp"

namespace psbc::cli {
namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Flags describing the classifier and the data it is trained on.
struct ModelFlags {
  std::string digits = "0,1";
  int n_t = 2;
  int n_pt = 196;
  double eps = 0.0;
  std::string bc = "neumann";
  int shared = 1;
  std::string subordinate = "true";
  double dt = 0.1;
  double dt_p = 0.0;  // 0 means "same as dt"
  std::string basis = "canonical";
  std::size_t train_limit = 0;
  std::size_t test_limit = 0;

  void add(CLI::App* app, bool with_digits = true) {
    if (with_digits) app->add_option("--digits", digits, "Digit pair a,b")->capture_default_str();
    app->add_option("--nt", n_t, "Number of layers")->capture_default_str();
    app->add_option("--npt", n_pt, "Columns of the basis matrix")->capture_default_str();
    app->add_option("--eps", eps, "Diffusion coefficient")->capture_default_str();
    app->add_option("--bc", bc, "neumann or periodic")->capture_default_str();
    app->add_option("--shared", shared, "Consecutive layers sharing one weight group")->capture_default_str();
    app->add_option("--subordinate", subordinate, "true or false")->capture_default_str();
    app->add_option("--dt", dt, "Time step ceiling of the U equation")->capture_default_str();
    app->add_option("--dt-p", dt_p, "Time step ceiling of the P equation (default: --dt)");
    app->add_option("--basis", basis, "canonical or pca")->capture_default_str();
    app->add_option("--train-limit", train_limit, "Keep only the first rows of the training split (0 = all)")
        ->capture_default_str();
    app->add_option("--test-limit", test_limit, "Keep only the first rows of the test split (0 = all)")
        ->capture_default_str();
  }

  std::pair<int, int> pair() const {
    const auto comma = digits.find(',');
    if (comma == std::string::npos) throw ConfigError("--digits expects a,b");
    int a = 0, b = 0;
    try {
      std::size_t used = 0;
      a = std::stoi(digits.substr(0, comma), &used);
      if (used != comma) throw ConfigError("--digits expects a,b");
      const std::string rest = digits.substr(comma + 1);
      b = std::stoi(rest, &used);
      if (used != rest.size()) throw ConfigError("--digits expects a,b");
    } catch (const std::logic_error&) {
      throw ConfigError("--digits expects two integers a,b");
    }
    if (a < 0 || a > 9 || b < 0 || b > 9 || a == b)
      throw ConfigError("invalid digit pair " + digits + ": need two different digits in 0..9");
    return {std::min(a, b), std::max(a, b)};
  }

  BasisChoice basis_choice() const {
    if (basis == "canonical") return BasisChoice::Canonical;
    if (basis == "pca") return BasisChoice::Pca;
    throw ConfigError("unknown basis '" + basis + "'");
  }

  Hyperparameters hyperparameters(int n_u) const {
    Hyperparameters hp;
    hp.n_t = n_t;
    hp.n_u = n_u;
    hp.n_pt = n_pt;
    hp.eps = eps;
    hp.shared_k = shared;
    hp.bc = parse_boundary_condition(bc);
    hp.subordination = parse_subordination(subordinate);
    hp.dt_u = hp.dt_star_u = dt;
    hp.dt_p = hp.dt_star_p = dt_p > 0.0 ? dt_p : dt;
    hp.validate();
    return hp;
  }

  void print(std::ostream& err, const Hyperparameters& hp) const {
    err << "  digits = " << digits << "\n"
        << "  n_t = " << hp.n_t << "\n"
        << "  n_u = " << hp.n_u << "\n"
        << "  n_pt = " << hp.n_pt << "\n"
        << "  eps = " << fmt(hp.eps) << "\n"
        << "  bc = " << to_string(hp.bc) << "\n"
        << "  shared = " << hp.shared_k << "\n"
        << "  subordination = " << to_string(hp.subordination) << "\n"
        << "  dt_u = " << fmt(hp.dt_star_u) << "\n"
        << "  dt_p = " << fmt(hp.dt_star_p) << "\n"
        << "  basis = " << basis << "\n"
        << "  train_limit = " << train_limit << "\n"
        << "  test_limit = " << test_limit << "\n";
  }
};

struct ScheduleFlags {
  double lr_u = 0.1;
  double lr_p = 0.1;
  int epochs = 20;
  int batch = 32;
  int patience = 10;
  double decay = 0.5;
  int decay_every = 5;

  void add(CLI::App* app) {
    app->add_option("--lr-u", lr_u, "Learning rate of the U weights")->capture_default_str();
    app->add_option("--lr-p", lr_p, "Learning rate of the P weights")->capture_default_str();
    app->add_option("--epochs", epochs, "Maximum number of epochs")->capture_default_str();
    app->add_option("--batch", batch, "Minibatch size")->capture_default_str();
    app->add_option("--patience", patience, "Epochs without improvement before stopping")->capture_default_str();
    app->add_option("--lr-decay", decay, "Learning rate decay factor")->capture_default_str();
    app->add_option("--decay-every", decay_every, "Epochs between learning rate decays")->capture_default_str();
  }

  TrainConfig config(std::uint64_t seed) const {
    TrainConfig c;
    c.lr_u = lr_u;
    c.lr_p = lr_p;
    c.epochs = epochs;
    c.batch_size = batch;
    c.patience = patience;
    c.lr_decay = decay;
    c.decay_every = decay_every;
    c.seed = seed;
    c.validate();
    return c;
  }

  void print(std::ostream& err) const {
    err << "  lr_u = " << fmt(lr_u) << "\n"
        << "  lr_p = " << fmt(lr_p) << "\n"
        << "  epochs = " << epochs << "\n"
        << "  batch = " << batch << "\n"
        << "  patience = " << patience << "\n"
        << "  lr_decay = " << fmt(decay) << "\n"
        << "  decay_every = " << decay_every << "\n";
  }
};

fs::path data_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PSBC_DATA_DIR"); env && *env) return env;
  throw ConfigError("no MNIST directory: pass --data-dir or set PSBC_DATA_DIR");
}

MnistSplit load_data(const std::string& flag, std::ostream& err) {
  const fs::path dir = data_dir(flag);
  err << "  data_dir = " << dir.string() << "\n";
  for (const char* name :
       {"train-images-idx3-ubyte", "train-labels-idx1-ubyte", "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"})
    if (!fs::exists(dir / name)) throw ConfigError("missing data file " + (dir / name).string());
  return load_mnist(dir);
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_text_atomic(path, text);
}

void print_grid(std::ostream& os, const GridResult& grid) {
  os << "lr_u,lr_p,dt_u,dt_p,mean_accuracy,fold_accuracies\n";
  for (const auto& row : grid.table) {
    os << fmt(row.candidate.lr_u) << ',' << fmt(row.candidate.lr_p) << ',' << fmt(row.candidate.dt_star_u) << ','
       << fmt(row.candidate.dt_star_p) << ',' << fmt(row.mean_accuracy) << ',';
    for (std::size_t i = 0; i < row.fold_accuracy.size(); ++i) os << (i ? ";" : "") << fmt(row.fold_accuracy[i]);
    os << '\n';
  }
}

std::string candidate_text(const Candidate& c) {
  return "lr_u=" + fmt(c.lr_u) + " lr_p=" + fmt(c.lr_p) + " dt_u=" + fmt(c.dt_star_u) + " dt_p=" + fmt(c.dt_star_p);
}

GridConfig grid_config(const std::string& path) { return path.empty() ? GridConfig{} : load_grid_config(path); }

void print_grid_config(std::ostream& err, const GridConfig& cfg) {
  std::istringstream lines(format_grid_config(cfg));
  for (std::string line; std::getline(lines, line);)
    if (!line.empty()) err << "  " << line << "\n";
}

SavedClassifier saved(const PsbcModel& model, const NormalizationMap& norm, int a, int b) {
  SavedClassifier s{model, norm, std::pair{a, b}};
  return s;
}

// ---------------------------------------------------------------------------

int cmd_ingest(const std::string& dir_flag, std::ostream& out, std::ostream& err) {
  err << "ingest\n";
  const MnistSplit mnist = load_data(dir_flag, err);
  auto counts = [](const std::vector<int>& labels) {
    std::array<std::size_t, 10> c{};
    for (int y : labels) ++c[static_cast<std::size_t>(y)];
    return c;
  };
  const auto tr = counts(mnist.train_labels);
  const auto te = counts(mnist.test_labels);
  out << "split,records,rows,cols";
  for (int d = 0; d < 10; ++d) out << ",digit_" << d;
  out << "\n";
  auto line = [&](const char* name, const IdxImages& img, const std::array<std::size_t, 10>& c) {
    out << name << ',' << img.count << ',' << img.rows << ',' << img.cols;
    for (auto v : c) out << ',' << v;
    out << "\n";
  };
  line("train_dev", mnist.train_images, tr);
  line("test", mnist.test_images, te);
  return kSuccess;
}

int cmd_train(const ModelFlags& mf, const ScheduleFlags& sf, std::uint64_t seed, const std::string& dir_flag,
              const std::string& out_path, std::string history_path, std::ostream& out, std::ostream& err) {
  const auto [a, b] = mf.pair();
  const Hyperparameters hp_check = mf.hyperparameters(784);
  err << "train\n";
  mf.print(err, hp_check);
  sf.print(err);
  if (history_path.empty()) history_path = out_path + ".history.csv";
  err << "  seed = " << seed << "\n  out = " << out_path << "\n  history = " << history_path << "\n";
  const MnistSplit mnist = load_data(dir_flag, err);
  const PairData pair = prepare_pair(mnist, a, b, mf.train_limit, mf.test_limit);
  const Hyperparameters hp = mf.hyperparameters(pair.train_dev.n_u);
  const BasisMatrix basis = make_basis(mf.basis_choice(), hp, pair.train_dev);

  PsbcModel model = PsbcModel::create(hp, basis, init_weights(hp, derive_seed(seed, {0})));
  const TrainConfig cfg = sf.config(derive_seed(seed, {1}));
  const FitReport report = fit(model, pair.train_dev, pair.train_dev, cfg);

  std::ostringstream hist;
  write_history_csv(hist, report.history);
  write_file(history_path, hist.str());
  write_file(out_path, serialize_model(saved(model, pair.normalization, a, b)));

  out << "digits," << a << ',' << b << "\n"
      << "best_epoch," << report.best_epoch << "\n"
      << "train_dev_accuracy," << fmt(report.best_accuracy) << "\n"
      << "test_accuracy," << fmt(accuracy(model, pair.test)) << "\n"
      << "dt_u," << fmt(model.hp.dt_u) << "\n"
      << "dt_p," << fmt(model.hp.dt_p) << "\n";
  return kSuccess;
}

int cmd_grid(const ModelFlags& mf, std::uint64_t seed, const std::string& dir_flag, const std::string& config_path,
             const std::string& out_path, std::ostream& out, std::ostream& err) {
  const auto [a, b] = mf.pair();
  const GridConfig cfg = grid_config(config_path);
  cfg.validate();
  err << "grid\n";
  mf.print(err, mf.hyperparameters(784));
  print_grid_config(err, cfg);
  err << "  seed = " << seed << "\n";
  const MnistSplit mnist = load_data(dir_flag, err);
  const PairData pair = prepare_pair(mnist, a, b, mf.train_limit, mf.test_limit);
  const Hyperparameters hp = mf.hyperparameters(pair.train_dev.n_u);
  const BasisMatrix basis = make_basis(mf.basis_choice(), hp, pair.train_dev);
  const GridResult grid = grid_search(cfg.candidates(), pair.train_dev, hp, basis, cfg.folds,
                                      cfg.schedule(cfg.epochs_grid), seed);
  std::ostringstream table;
  print_grid(table, grid);
  if (!out_path.empty()) write_file(out_path, table.str());
  out << table.str() << "best," << candidate_text(grid.best_candidate()) << "\n";
  return kSuccess;
}

int cmd_assess(const ModelFlags& mf, std::uint64_t seed, const std::string& dir_flag, const std::string& config_path,
               int repeats, const std::optional<Candidate>& fixed_candidate, const std::string& out_dir,
               std::ostream& out, std::ostream& err) {
  const auto [a, b] = mf.pair();
  const GridConfig cfg = grid_config(config_path);
  cfg.validate();
  if (repeats < 1) throw ConfigError("--repeats must be positive");
  err << "assess\n";
  mf.print(err, mf.hyperparameters(784));
  print_grid_config(err, cfg);
  err << "  repeats = " << repeats << "\n  seed = " << seed << "\n";
  if (fixed_candidate) err << "  candidate = " << candidate_text(*fixed_candidate) << "\n";
  const MnistSplit mnist = load_data(dir_flag, err);
  const PairData pair = prepare_pair(mnist, a, b, mf.train_limit, mf.test_limit);
  const Hyperparameters hp = mf.hyperparameters(pair.train_dev.n_u);
  const BasisMatrix basis = make_basis(mf.basis_choice(), hp, pair.train_dev);

  Candidate best;
  if (fixed_candidate) {
    best = *fixed_candidate;
  } else {
    const GridResult grid = grid_search(cfg.candidates(), pair.train_dev, hp, basis, cfg.folds,
                                        cfg.schedule(cfg.epochs_grid), derive_seed(seed, {0}));
    print_grid(out, grid);
    best = grid.best_candidate();
  }
  out << "selected," << candidate_text(best) << "\n";
  const AssessResult res = assess(hp, basis, best, pair.train_dev, pair.test, repeats,
                                  cfg.schedule(cfg.epochs_final), derive_seed(seed, {1}));
  for (std::size_t r = 0; r < res.accuracies.size(); ++r) {
    out << "repeat," << r << ',' << fmt(res.accuracies[r]) << "\n";
    if (!out_dir.empty())
      write_file(fs::path(out_dir) / ("model_" + std::to_string(r) + ".json"),
                 serialize_model(saved(res.models[r], pair.normalization, a, b)));
  }
  out << "mean," << fmt(res.mean) << "\n"
      << "sd," << fmt(res.sd) << "\n"
      << "summary," << fixed(100.0 * res.mean, 2) << "% +/- " << fixed(100.0 * res.sd, 2) << "%\n";
  return kSuccess;
}

std::vector<Committee> load_committees(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("model directory " + dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::map<std::pair<int, int>, Committee> by_pair;
  for (const auto& f : files) {
    SavedClassifier s = load_model(f);
    if (!s.digits || !s.normalization)
      throw ConfigError("model " + f.string() + " lacks the digit pair or normalization map");
    auto [it, inserted] = by_pair.try_emplace(*s.digits);
    Committee& c = it->second;
    if (inserted) {
      c.a = s.digits->first;
      c.b = s.digits->second;
      c.normalization = *s.normalization;
    } else if (c.normalization.mu != s.normalization->mu) {
      throw ConfigError("models for pair " + std::to_string(c.a) + "," + std::to_string(c.b) +
                        " disagree on the normalization map");
    }
    c.members.push_back(std::move(s.model));
  }
  std::vector<Committee> out;
  for (auto& [key, c] : by_pair) out.push_back(std::move(c));
  return out;
}

void save_committees(const fs::path& dir, const std::vector<Committee>& committees) {
  for (const auto& c : committees)
    for (std::size_t m = 0; m < c.members.size(); ++m)
      write_file(dir / ("pair_" + std::to_string(c.a) + "_" + std::to_string(c.b) + "_" + std::to_string(m) + ".json"),
                 serialize_model(saved(c.members[m], c.normalization, c.a, c.b)));
}

struct MulticlassFlags {
  std::string models;
  bool train = false;
  std::size_t per_pair = 0;
  int members = 1;
  std::string report;
  std::string confusion;
  std::string config;  // per-pair grid search when set
};

int cmd_multiclass(const ModelFlags& mf, const ScheduleFlags& sf, const MulticlassFlags& mc, std::uint64_t seed,
                   const std::string& dir_flag, std::ostream& out, std::ostream& err) {
  if (!mc.train && mc.models.empty()) throw ConfigError("multiclass needs --models DIR or --train");
  err << "multiclass\n";
  std::optional<GridConfig> cfg;
  if (mc.train && !mc.config.empty()) {
    cfg = load_grid_config(mc.config);
    cfg->validate();
  }
  if (mc.train) {
    mf.print(err, mf.hyperparameters(784));
    if (cfg)
      print_grid_config(err, *cfg);
    else
      sf.print(err);
    err << "  per_pair = " << mc.per_pair << "\n  members = " << mc.members << "\n";
  }
  err << "  models = " << mc.models << "\n  test_limit = " << mf.test_limit << "\n  seed = " << seed << "\n";
  const MnistSplit mnist = load_data(dir_flag, err);
  std::vector<Committee> committees;
  if (mc.train) {
    OvoOptions opt;
    opt.hp = mf.hyperparameters(static_cast<int>(mnist.train_images.rows * mnist.train_images.cols));
    opt.basis = mf.basis_choice();
    opt.candidate = Candidate{sf.lr_u, sf.lr_p, opt.hp.dt_star_u, opt.hp.dt_star_p};
    opt.schedule = sf.config(0);
    if (cfg) {
      opt.grid = cfg->candidates();
      opt.folds = cfg->folds;
      opt.grid_schedule = cfg->schedule(cfg->epochs_grid);
      opt.schedule = cfg->schedule(cfg->epochs_final);
    }
    opt.members = mc.members;
    opt.per_pair = mc.per_pair;
    opt.seed = derive_seed(seed, {0});
    committees = train_committees(mnist, opt, [&](int a, int b, double acc) {
      err << "pair " << a << "," << b << " train-dev accuracy " << fixed(acc) << "\n";
    });
    if (!mc.models.empty()) save_committees(mc.models, committees);
  } else {
    committees = load_committees(mc.models);
  }
  const MulticlassReport report = evaluate_multiclass(committees, mnist.test(), mf.test_limit, derive_seed(seed, {1}));
  std::ostringstream text;
  write_multiclass_report(text, report);
  if (!mc.report.empty()) write_file(mc.report, text.str());
  if (!mc.confusion.empty()) {
    std::ostringstream cm;
    write_confusion_csv(cm, report.confusion);
    write_file(mc.confusion, cm.str());
  }
  out << text.str();
  return kSuccess;
}

struct SimulateFlags {
  std::string alpha = "const:0.9";
  int n_u = 20;
  int n_t = 300;
  double dt = 0.1;
  double eps = 0.3;
  std::string bc = "neumann";
  std::string out;
};

int cmd_simulate(const SimulateFlags& sf, std::ostream& out, std::ostream& err) {
  SimulationSetup setup;
  setup.n_u = sf.n_u;
  setup.n_t = sf.n_t;
  setup.dt = sf.dt;
  setup.eps = sf.eps;
  setup.bc = parse_boundary_condition(sf.bc);
  const AlphaProfile profile = parse_alpha_profile(sf.alpha);
  err << "simulate\n  alpha = " << sf.alpha << "\n  n_u = " << setup.n_u << "\n  n_t = " << setup.n_t
      << "\n  dt = " << fmt(setup.dt) << "\n  eps = " << fmt(setup.eps) << "\n  bc = " << to_string(setup.bc)
      << "\n  out = " << (sf.out.empty() ? "-" : sf.out) << "\n  seed = none\n";
  const Vector alpha = sample_profile(profile, setup.n_u);
  const Trajectory traj = allen_cahn_simulate(alpha, figure_initial_condition(setup.n_u), setup);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  if (sf.out.empty())
    out << csv.str();
  else
    write_file(sf.out, csv.str());
  return kSuccess;
}

int cmd_verify(double scale, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  if (!(scale > 0.0 && scale <= 1.0)) throw ConfigError("--scale must lie in (0, 1]");
  err << "verify\n  scale = " << fmt(scale) << "\n  seed = " << seed << "\n";
  int failed = 0, total = 0;
  for (const auto& suite : suites::default_suites(scale, seed)) {
    const suites::SuiteResult r = suite.run();
    ++total;
    if (!r.passed()) ++failed;
    out << (r.passed() ? "PASS " : "FAIL ") << suite.name << " checks=" << r.checks << " failures=" << r.failures
        << " worst=" << fmt(r.worst);
    if (!r.detail.empty()) out << " (" << r.detail << ")";
    out << "\n";
  }
  out << "suites passed " << (total - failed) << "/" << total << "\n";
  return failed ? kInternalError : kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase separation binary classifier toolkit", "psbc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::uint64_t seed = 0;
  std::string dir_flag;
  auto add_common = [&](CLI::App* sub, bool data) {
    sub->add_option("--seed", seed, "Base random seed")->capture_default_str();
    if (data) sub->add_option("--data-dir", dir_flag, "MNIST directory (default: $PSBC_DATA_DIR)");
  };

  CLI::App* ingest = app.add_subcommand("ingest", "Read the MNIST files and print record counts");
  ingest->add_option("--data-dir", dir_flag, "MNIST directory (default: $PSBC_DATA_DIR)");

  ModelFlags model_flags;
  ScheduleFlags schedule_flags;

  CLI::App* train = app.add_subcommand("train", "Train one binary classifier on a digit pair");
  model_flags.add(train);
  schedule_flags.add(train);
  add_common(train, true);
  std::string out_path, history_path;
  train->add_option("--out", out_path, "Model file to write")->required();
  train->add_option("--history", history_path, "Training history CSV (default: <out>.history.csv)");

  CLI::App* grid = app.add_subcommand("grid", "Cross-validated grid search on a digit pair");
  model_flags.add(grid);
  add_common(grid, true);
  std::string config_path, grid_out;
  grid->add_option("--config", config_path, "Grid configuration file");
  grid->add_option("--out", grid_out, "CSV file for the score table");

  CLI::App* assess_cmd = app.add_subcommand("assess", "Select by grid search, retrain and score on the test split");
  model_flags.add(assess_cmd);
  add_common(assess_cmd, true);
  int repeats = 5;
  std::string out_dir;
  double lr_u = 0.0, lr_p = 0.0;
  assess_cmd->add_option("--config", config_path, "Grid configuration file");
  assess_cmd->add_option("--repeats", repeats, "Retraining repeats")->capture_default_str();
  auto* lr_u_opt = assess_cmd->add_option("--lr-u", lr_u, "Skip the grid search and use these rates");
  assess_cmd->add_option("--lr-p", lr_p, "P learning rate for a fixed candidate (default: --lr-u)")
      ->needs(lr_u_opt);
  assess_cmd->add_option("--out-dir", out_dir, "Directory for the retrained models");

  CLI::App* multiclass = app.add_subcommand("multiclass", "One-vs-one committees over all digit pairs");
  model_flags.add(multiclass, false);
  schedule_flags.add(multiclass);
  add_common(multiclass, true);
  MulticlassFlags mc;
  multiclass->add_option("--models", mc.models, "Directory of pair models (read, or written with --train)");
  multiclass->add_flag("--train", mc.train, "Train the 45 pair committees first");
  multiclass->add_option("--per-pair", mc.per_pair, "Training rows per pair (0 = all)")->capture_default_str();
  multiclass->add_option("--members", mc.members, "Classifiers per committee")->capture_default_str();
  multiclass->add_option("--config", mc.config, "Grid configuration: select each pair's rates by grid search");
  multiclass->add_option("--report", mc.report, "Write the report to this file");
  multiclass->add_option("--confusion", mc.confusion, "Write the confusion matrix CSV to this file");

  CLI::App* simulate = app.add_subcommand("simulate", "Run the Allen-Cahn scheme and emit the trajectory as CSV");
  SimulateFlags sim;
  simulate->add_option("--alpha", sim.alpha, "const:<v>, step or parabola")->capture_default_str();
  simulate->add_option("--nu", sim.n_u, "Grid points")->capture_default_str();
  simulate->add_option("--nt", sim.n_t, "Time steps")->capture_default_str();
  simulate->add_option("--dt", sim.dt, "Time step")->capture_default_str();
  simulate->add_option("--eps", sim.eps, "Diffusion coefficient")->capture_default_str();
  simulate->add_option("--bc", sim.bc, "neumann or periodic")->capture_default_str();
  simulate->add_option("--out", sim.out, "CSV file (default: standard output)");

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant and oracle property suites");
  double scale = 1.0;
  verify->add_option("--scale", scale, "Fraction of the default sample counts")->capture_default_str();
  add_common(verify, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kSuccess : kUserError;
  }

  try {
    if (*ingest) return cmd_ingest(dir_flag, out, err);
    if (*train)
      return cmd_train(model_flags, schedule_flags, seed, dir_flag, out_path, history_path, out, err);
    if (*grid) return cmd_grid(model_flags, seed, dir_flag, config_path, grid_out, out, err);
    if (*assess_cmd) {
      std::optional<Candidate> fixed_candidate;
      if (lr_u_opt->count() > 0) {
        const Hyperparameters hp = model_flags.hyperparameters(784);
        fixed_candidate = Candidate{lr_u, lr_p > 0.0 ? lr_p : lr_u, hp.dt_star_u, hp.dt_star_p};
      }
      return cmd_assess(model_flags, seed, dir_flag, config_path, repeats, fixed_candidate, out_dir, out, err);
    }
    if (*multiclass) return cmd_multiclass(model_flags, schedule_flags, mc, seed, dir_flag, out, err);
    if (*simulate) return cmd_simulate(sim, out, err);
    if (*verify) return cmd_verify(scale, seed, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const LoadError& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace psbc::cli
