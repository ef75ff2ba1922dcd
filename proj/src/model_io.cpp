#include "psbc/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <system_error>

#include "psbc/error.hpp"

namespace psbc {
namespace {

using json = nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string array(std::span<const double> v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += num(v[i]);
  }
  return out + "]";
}

std::string matrix(const std::vector<Vector>& rows, const std::string& indent) {
  if (rows.empty()) return "[]";
  std::string out = "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += indent + "  " + array(rows[i]);
    out += i + 1 < rows.size() ? ",\n" : "\n";
  }
  return out + indent + "]";
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw LoadError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw LoadError(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join_path(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

int get_int(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number_integer()) throw LoadError(join_path(path, key), "expected an integer");
  const auto i = v.get<long long>();
  if (i < -2147483647LL || i > 2147483647LL) throw LoadError(join_path(path, key), "integer out of range");
  return static_cast<int>(i);
}

double get_double(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number()) throw LoadError(join_path(path, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw LoadError(join_path(path, key), "expected a finite number");
  return d;
}

std::string get_string(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) throw LoadError(join_path(path, key), "expected a string");
  return v.get<std::string>();
}

Vector get_vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw LoadError(path, "expected an array of numbers");
  Vector out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw LoadError(path, "expected an array of numbers");
    const double d = e.get<double>();
    if (!std::isfinite(d)) throw LoadError(path, "non-finite entry");
    out.push_back(d);
  }
  return out;
}

std::vector<Vector> get_matrix(const json& v, const std::string& path) {
  if (!v.is_array()) throw LoadError(path, "expected an array of arrays");
  std::vector<Vector> out;
  for (const auto& row : v) out.push_back(get_vector(row, path));
  return out;
}

// The dimension fields are checked against the array shapes so that a
// tampered header is reported under its own name.
void check_dimension(int declared, std::size_t actual, const char* name) {
  if (static_cast<std::size_t>(declared) != actual)
    throw LoadError(std::string("hyperparameters.") + name,
                    "declares " + std::to_string(declared) + " but the stored arrays have " + std::to_string(actual));
}

}  // namespace

std::string serialize_model(const SavedClassifier& saved) {
  const auto& m = saved.model;
  const auto& hp = m.hp;
  std::string s = "{\n";
  s += "  \"format_version\": " + std::to_string(kModelFormatVersion) + ",\n";
  s += "  \"hyperparameters\": {\n";
  s += "    \"n_t\": " + std::to_string(hp.n_t) + ",\n";
  s += "    \"n_u\": " + std::to_string(hp.n_u) + ",\n";
  s += "    \"n_pt\": " + std::to_string(hp.n_pt) + ",\n";
  s += "    \"eps\": " + num(hp.eps) + ",\n";
  s += "    \"dt_u\": " + num(hp.dt_u) + ",\n";
  s += "    \"dt_p\": " + num(hp.dt_p) + ",\n";
  s += "    \"dt_star_u\": " + num(hp.dt_star_u) + ",\n";
  s += "    \"dt_star_p\": " + num(hp.dt_star_p) + ",\n";
  s += "    \"shared_k\": " + std::to_string(hp.shared_k) + ",\n";
  s += "    \"bc\": \"" + std::string(to_string(hp.bc)) + "\",\n";
  s += "    \"subordination\": \"" + std::string(to_string(hp.subordination)) + "\"\n";
  s += "  },\n";
  if (saved.digits)
    s += "  \"digits\": [" + std::to_string(saved.digits->first) + ", " + std::to_string(saved.digits->second) + "],\n";
  else
    s += "  \"digits\": null,\n";
  s += "  \"basis_u\": {\n";
  s += "    \"kind\": \"" + std::string(to_string(m.basis_u.kind())) + "\"";
  if (!m.basis_u.is_block()) {
    std::vector<Vector> rows;
    const auto e = m.basis_u.dense_entries();
    const auto cols = static_cast<std::size_t>(m.basis_u.cols());
    for (int r = 0; r < m.basis_u.rows(); ++r)
      rows.emplace_back(e.begin() + static_cast<std::ptrdiff_t>(r * cols),
                        e.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
    s += ",\n    \"entries\": " + matrix(rows, "    ");
  }
  s += "\n  },\n";
  s += "  \"weights\": {\n";
  s += "    \"w_u\": " + matrix(m.weights.w_u, "    ") + ",\n";
  s += "    \"w_p\": " + matrix(m.weights.w_p, "    ") + "\n";
  s += "  },\n";
  if (saved.normalization)
    s += "  \"normalization\": {\n    \"mu\": " + array(saved.normalization->mu) + "\n  }\n";
  else
    s += "  \"normalization\": null\n";
  s += "}\n";
  return s;
}

SavedClassifier deserialize_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw LoadError("(document)", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw LoadError("(document)", "expected a JSON object");

  const int version = get_int(doc, "format_version", "");
  if (version != kModelFormatVersion)
    throw LoadError("format_version", "unsupported version " + std::to_string(version));

  const json& jh = field(doc, "hyperparameters", "");
  const std::string hpath = "hyperparameters";
  Hyperparameters hp;
  hp.n_t = get_int(jh, "n_t", hpath);
  hp.n_u = get_int(jh, "n_u", hpath);
  hp.n_pt = get_int(jh, "n_pt", hpath);
  hp.eps = get_double(jh, "eps", hpath);
  hp.dt_u = get_double(jh, "dt_u", hpath);
  hp.dt_p = get_double(jh, "dt_p", hpath);
  hp.dt_star_u = get_double(jh, "dt_star_u", hpath);
  hp.dt_star_p = get_double(jh, "dt_star_p", hpath);
  hp.shared_k = get_int(jh, "shared_k", hpath);
  try {
    hp.bc = parse_boundary_condition(get_string(jh, "bc", hpath));
  } catch (const ConfigError& e) {
    throw LoadError("hyperparameters.bc", e.what());
  }
  try {
    hp.subordination = parse_subordination(get_string(jh, "subordination", hpath));
  } catch (const ConfigError& e) {
    throw LoadError("hyperparameters.subordination", e.what());
  }

  SavedClassifier saved;
  const json& jd = field(doc, "digits", "");
  if (!jd.is_null()) {
    if (!jd.is_array() || jd.size() != 2 || !jd[0].is_number_integer() || !jd[1].is_number_integer())
      throw LoadError("digits", "expected null or a pair of integers");
    const int a = jd[0].get<int>();
    const int b = jd[1].get<int>();
    if (a < 0 || a > 9 || b < 0 || b > 9 || a >= b) throw LoadError("digits", "expected two digits in increasing order");
    saved.digits = std::make_pair(a, b);
  }

  const json& jw = field(doc, "weights", "");
  WeightStack w;
  w.w_u = get_matrix(field(jw, "w_u", "weights"), "weights.w_u");
  w.w_p = get_matrix(field(jw, "w_p", "weights"), "weights.w_p");
  if (w.w_u.empty() || w.w_u.size() != w.w_p.size())
    throw LoadError("weights", "w_u and w_p must hold the same non-zero number of groups");
  for (const auto& g : w.w_u)
    if (g.size() != w.w_u[0].size()) throw LoadError("weights.w_u", "groups differ in length");
  for (const auto& g : w.w_p)
    if (g.size() != w.w_p[0].size()) throw LoadError("weights.w_p", "groups differ in length");
  w.n_p = static_cast<int>(w.w_p[0].size());

  const json& jn = field(doc, "normalization", "");
  if (!jn.is_null()) saved.normalization = NormalizationMap{get_vector(field(jn, "mu", "normalization"), "normalization.mu")};

  const json& jb = field(doc, "basis_u", "");
  const std::string kind = get_string(jb, "kind", "basis_u");
  std::optional<std::vector<Vector>> dense_rows;
  if (kind == "pca") {
    dense_rows = get_matrix(field(jb, "entries", "basis_u"), "basis_u.entries");
    if (dense_rows->empty()) throw LoadError("basis_u.entries", "empty matrix");
    for (const auto& r : *dense_rows)
      if (r.size() != (*dense_rows)[0].size()) throw LoadError("basis_u.entries", "rows differ in length");
  } else if (kind != "canonical" && kind != "identity") {
    throw LoadError("basis_u.kind", "unknown basis kind '" + kind + "'");
  }

  check_dimension(hp.n_pt, w.w_u[0].size(), "n_pt");
  if (saved.normalization) check_dimension(hp.n_u, saved.normalization->mu.size(), "n_u");
  if (dense_rows) {
    check_dimension(hp.n_u, dense_rows->size(), "n_u");
    check_dimension(hp.n_pt, (*dense_rows)[0].size(), "n_pt");
  }
  check_dimension(hp.subordination == Subordination::Subordinate ? hp.n_pt : 1, w.w_p[0].size(),
                  "subordination");
  if (hp.shared_k >= 1 && hp.n_t >= 1) check_dimension(hp.n_groups(), w.w_u.size(), "n_t");

  try {
    hp.validate();
  } catch (const ConfigError& e) {
    throw LoadError("hyperparameters", e.what());
  }

  BasisMatrix basis;
  try {
    if (dense_rows) {
      Vector flat;
      for (const auto& r : *dense_rows) flat.insert(flat.end(), r.begin(), r.end());
      basis = BasisMatrix::dense(hp.n_u, hp.n_pt, std::move(flat), BasisKind::Pca);
    } else if (kind == "identity") {
      if (hp.n_pt != hp.n_u) throw LoadError("basis_u.kind", "identity basis needs n_pt == n_u");
      basis = BasisMatrix::identity(hp.n_u);
    } else {
      basis = BasisMatrix::canonical(hp.n_u, hp.n_pt);
    }
  } catch (const LoadError&) {
    throw;
  } catch (const Error& e) {
    throw LoadError("basis_u", e.what());
  }
  try {
    saved.model = PsbcModel::create(hp, std::move(basis), std::move(w));
  } catch (const Error& e) {
    throw LoadError("weights", e.what());
  }
  if (saved.normalization)
    for (double v : saved.normalization->mu)
      if (!(v >= 0.0 && v <= 1.0)) throw LoadError("normalization.mu", "entries must lie in [0, 1]");
  return saved;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_model(const SavedClassifier& saved, const std::filesystem::path& path) {
  write_text_atomic(path, serialize_model(saved));
}

SavedClassifier load_model(const std::filesystem::path& path) { return deserialize_model(read_text(path)); }

}  // namespace psbc
