#include "psbc/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "psbc/error.hpp"

namespace psbc {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view text, int line) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v))
    throw ConfigError("line " + std::to_string(line) + ": '" + s + "' is not a number");
  return v;
}

int parse_int(std::string_view text, int line) {
  const double v = parse_double(text, line);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError("line " + std::to_string(line) + ": '" + std::string(trim(text)) + "' is not an integer");
  return static_cast<int>(v);
}

std::vector<double> parse_list(std::string_view text, int line) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_double(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start), line));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out;
}

}  // namespace

std::vector<Candidate> GridConfig::candidates() const {
  std::vector<Candidate> out;
  for (double lu : lr_u)
    for (double lp : lr_p) {
      if (dt_p.empty()) {
        for (double d : dt_u) out.push_back({lu, lp, d, d});
      } else {
        for (double du : dt_u)
          for (double dp : dt_p) out.push_back({lu, lp, du, dp});
      }
    }
  return out;
}

TrainConfig GridConfig::schedule(int epochs) const {
  TrainConfig cfg;
  cfg.lr_decay = lr_decay;
  cfg.decay_every = decay_every;
  cfg.epochs = epochs;
  cfg.batch_size = batch_size;
  cfg.patience = patience;
  return cfg;
}

void GridConfig::validate() const {
  if (lr_u.empty() || lr_p.empty() || dt_u.empty()) throw ConfigError("grid lists must not be empty");
  for (double v : lr_u)
    if (v < 0.0) throw ConfigError("learning rates must be non-negative");
  for (double v : lr_p)
    if (v < 0.0) throw ConfigError("learning rates must be non-negative");
  for (const auto* l : {&dt_u, &dt_p})
    for (double v : *l)
      if (!(v > 0.0)) throw ConfigError("time steps must be positive");
  if (folds < 2) throw ConfigError("folds must be at least 2");
  schedule(epochs_grid).validate();
  schedule(epochs_final).validate();
}

GridConfig parse_grid_config(std::string_view text) {
  GridConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "lr_u") cfg.lr_u = parse_list(value, line_no);
    else if (key == "lr_p") cfg.lr_p = parse_list(value, line_no);
    else if (key == "dt") { cfg.dt_u = parse_list(value, line_no); cfg.dt_p.clear(); }
    else if (key == "dt_u") cfg.dt_u = parse_list(value, line_no);
    else if (key == "dt_p") cfg.dt_p = parse_list(value, line_no);
    else if (key == "epochs_grid") cfg.epochs_grid = parse_int(value, line_no);
    else if (key == "epochs_final") cfg.epochs_final = parse_int(value, line_no);
    else if (key == "lr_decay") cfg.lr_decay = parse_double(value, line_no);
    else if (key == "decay_every") cfg.decay_every = parse_int(value, line_no);
    else if (key == "batch_size") cfg.batch_size = parse_int(value, line_no);
    else if (key == "patience") cfg.patience = parse_int(value, line_no);
    else if (key == "folds") cfg.folds = parse_int(value, line_no);
    else throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

GridConfig load_grid_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_grid_config(ss.str());
}

std::string format_grid_config(const GridConfig& cfg) {
  std::string out;
  char buf[64];
  out += "lr_u = " + join(cfg.lr_u) + "\n";
  out += "lr_p = " + join(cfg.lr_p) + "\n";
  if (cfg.dt_p.empty()) {
    out += "dt = " + join(cfg.dt_u) + "\n";
  } else {
    out += "dt_u = " + join(cfg.dt_u) + "\n";
    out += "dt_p = " + join(cfg.dt_p) + "\n";
  }
  std::snprintf(buf, sizeof buf, "%.17g", cfg.lr_decay);
  out += "epochs_grid = " + std::to_string(cfg.epochs_grid) + "\n";
  out += "epochs_final = " + std::to_string(cfg.epochs_final) + "\n";
  out += std::string("lr_decay = ") + buf + "\n";
  out += "decay_every = " + std::to_string(cfg.decay_every) + "\n";
  out += "batch_size = " + std::to_string(cfg.batch_size) + "\n";
  out += "patience = " + std::to_string(cfg.patience) + "\n";
  out += "folds = " + std::to_string(cfg.folds) + "\n";
  return out;
}

}  // namespace psbc
