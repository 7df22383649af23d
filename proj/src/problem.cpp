#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "tanglie/io.hpp"

namespace tanglie::io {

namespace {

const std::set<std::string> kKnownFields{"schema",   "name",       "dim",          "basis",
                                         "brackets", "metrics",    "symplectic",   "automorphisms"};

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

Index read_index(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) parse_fail(path, "expected an integer");
  return static_cast<Index>(v.get<std::int64_t>());
}

double read_number(const Json& v, const std::string& path) {
  if (!v.is_number()) parse_fail(path, "expected a number");
  return v.get<double>();
}

Matrix<double> read_matrix(const Json& v, Index dim, const std::string& path) {
  if (!v.is_array()) parse_fail(path, "expected an array of rows");
  if (static_cast<Index>(v.size()) != dim) {
    throw ValidationError(path, "expected " + std::to_string(dim) + " rows, got " + std::to_string(v.size()));
  }
  Matrix<double> m(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    const auto& row = v[static_cast<std::size_t>(r)];
    const std::string rpath = path + "[" + std::to_string(r) + "]";
    if (!row.is_array()) parse_fail(rpath, "expected an array");
    if (static_cast<Index>(row.size()) != dim) {
      throw ValidationError(rpath, "expected " + std::to_string(dim) + " columns, got " + std::to_string(row.size()));
    }
    for (Index c = 0; c < dim; ++c) {
      m(r, c) = read_number(row[static_cast<std::size_t>(c)], rpath + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

std::map<std::string, Matrix<double>> read_matrix_map(const Json& doc, const char* key, Index dim) {
  std::map<std::string, Matrix<double>> out;
  if (!doc.contains(key)) return out;
  const auto& obj = doc.at(key);
  if (!obj.is_object()) parse_fail(key, "expected an object of named matrices");
  for (const auto& [name, value] : obj.items()) {
    out.emplace(name, read_matrix(value, dim, std::string(key) + "." + name));
  }
  return out;
}

Json matrix_json(const Matrix<double>& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_number(double x, std::string& out) {
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void write_json(const Json& j, std::string& out, int indent, int depth) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      bool flat = j.size() <= 4;
      for (const auto& [key, value] : j.items()) flat = flat && is_scalar(value);
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += pretty && flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        out += Json(key).dump();
        out += pretty ? ": " : ":";
        write_json(value, out, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && is_scalar(e);
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += pretty && flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write_json(e, out, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      write_number(j.get<double>(), out);
      return;
    default:
      out += j.dump();
      return;
  }
}

ProblemFile make_catalog(std::string name, std::vector<std::string> basis,
                         std::vector<BracketEntry<double>> brackets, const Vector<double>& g2_diag) {
  ProblemFile p;
  p.name = std::move(name);
  p.dim = static_cast<Index>(basis.size());
  p.basis = std::move(basis);
  p.brackets = std::move(brackets);
  p.metrics["g1"] = Matrix<double>::Identity(p.dim, p.dim);
  p.metrics["g2"] = g2_diag.asDiagonal();
  return p;
}

Matrix<double> standard_form2() {
  Matrix<double> w(2, 2);
  w << 0, 1, -1, 0;
  return w;
}

}  // namespace

ProblemFile parse_problem(const Json& doc, const Tolerances& tol) {
  if (!doc.is_object()) parse_fail("$", "expected a JSON object");
  if (!doc.contains("schema") || !doc.at("schema").is_string()) parse_fail("schema", "missing schema tag");
  if (doc.at("schema").get<std::string>() != kSchema) {
    parse_fail("schema", "unsupported schema '" + doc.at("schema").get<std::string>() + "'");
  }

  ProblemFile p;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) parse_fail("name", "expected a string");
    p.name = doc.at("name").get<std::string>();
  }
  if (!doc.contains("dim")) parse_fail("dim", "missing");
  p.dim = read_index(doc.at("dim"), "dim");
  if (p.dim <= 0) throw ValidationError("dim", "dimension must be positive");

  if (doc.contains("basis")) {
    const auto& basis = doc.at("basis");
    if (!basis.is_array()) parse_fail("basis", "expected an array of labels");
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (!basis[i].is_string()) parse_fail("basis[" + std::to_string(i) + "]", "expected a string");
      p.basis.push_back(basis[i].get<std::string>());
    }
    if (static_cast<Index>(p.basis.size()) != p.dim) {
      throw ValidationError("basis", "expected " + std::to_string(p.dim) + " labels");
    }
    const std::set<std::string> unique(p.basis.begin(), p.basis.end());
    if (unique.size() != p.basis.size()) throw ValidationError("basis", "labels must be distinct");
  } else {
    p.basis = default_labels(p.dim);
  }

  std::set<std::tuple<Index, Index, Index>> seen;
  if (doc.contains("brackets")) {
    const auto& list = doc.at("brackets");
    if (!list.is_array()) parse_fail("brackets", "expected an array");
    for (std::size_t e = 0; e < list.size(); ++e) {
      const std::string path = "brackets[" + std::to_string(e) + "]";
      const auto& item = list[e];
      if (!item.is_object()) parse_fail(path, "expected an object {i, j, k, value}");
      for (const char* key : {"i", "j", "k", "value"}) {
        if (!item.contains(key)) parse_fail(path, std::string("missing field '") + key + "'");
      }
      BracketEntry<double> entry{read_index(item.at("i"), path + ".i"), read_index(item.at("j"), path + ".j"),
                                 read_index(item.at("k"), path + ".k"), read_number(item.at("value"), path + ".value")};
      for (Index idx : {entry.i, entry.j, entry.k}) {
        if (idx < 0 || idx >= p.dim) throw ValidationError(path, "index out of range");
      }
      if (entry.i == entry.j) throw ValidationError(path, "[X_i, X_i] entries are not allowed (i == j)");
      if (!seen.insert({entry.i, entry.j, entry.k}).second) throw ValidationError(path, "duplicate entry");
      p.brackets.push_back(entry);
    }
    for (std::size_t e = 0; e < p.brackets.size(); ++e) {
      const auto& entry = p.brackets[e];
      if (entry.i < entry.j) continue;
      const std::string path = "brackets[" + std::to_string(e) + "]";
      if (seen.count({entry.j, entry.i, entry.k}) != 0) {
        throw ValidationError(path, "duplicate orientation: both [X_i,X_j] and [X_j,X_i] given");
      }
      throw ValidationError(path, "bracket entries must have i < j");
    }
  }

  p.metrics = read_matrix_map(doc, "metrics", p.dim);
  p.symplectic = read_matrix_map(doc, "symplectic", p.dim);
  p.automorphisms = read_matrix_map(doc, "automorphisms", p.dim);

  for (const auto& [name, m] : p.metrics) {
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol.symmetry) {
      throw ValidationError("metrics." + name, "metric is not symmetric");
    }
    try {
      Metric<double> check(m, tol);
    } catch (const NonPositiveDefinite& e) {
      throw ValidationError("metrics." + name, std::string("non-positive-definite metric (") + e.what() + ")");
    }
  }
  for (const auto& [name, m] : p.symplectic) {
    if ((m + m.transpose()).cwiseAbs().maxCoeff() > tol.symmetry) {
      throw ValidationError("symplectic." + name, "form is not antisymmetric");
    }
  }

  const double jacobi = jacobi_defect(algebra_of(p));
  if (jacobi > tol.jacobi) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", jacobi);
    throw ValidationError("brackets", std::string("Jacobi identity violated (defect ") + buf + ")");
  }

  for (const auto& [key, value] : doc.items()) {
    if (kKnownFields.count(key) == 0) p.extra[key] = value;
  }
  return p;
}

ProblemFile load_problem(const std::filesystem::path& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_problem(doc, tol);
}

Json to_json(const ProblemFile& p) {
  Json doc;
  doc["schema"] = kSchema;
  doc["name"] = p.name;
  doc["dim"] = p.dim;
  doc["basis"] = p.basis;
  Json brackets = Json::array();
  for (const auto& e : p.brackets) {
    brackets.push_back(Json{{"i", e.i}, {"j", e.j}, {"k", e.k}, {"value", e.value}});
  }
  doc["brackets"] = std::move(brackets);
  auto put_map = [&](const char* key, const std::map<std::string, Matrix<double>>& m) {
    if (m.empty()) return;
    Json obj = Json::object();
    for (const auto& [name, mat] : m) obj[name] = matrix_json(mat);
    doc[key] = std::move(obj);
  };
  put_map("metrics", p.metrics);
  put_map("symplectic", p.symplectic);
  put_map("automorphisms", p.automorphisms);
  for (const auto& [key, value] : p.extra.items()) doc[key] = value;
  return doc;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"heisenberg", "solvable_rr2", "su2", "aff1", "abelian2", "abelian3"};
  return names;
}

ProblemFile catalog_algebra(const std::string& name) {
  if (name == "heisenberg") {
    // [X,Y] = Z
    auto p = make_catalog(name, {"X", "Y", "Z"}, {{0, 1, 2, 1.0}}, Vector<double>{{2.0, 2.0, 1.0}});
    p.automorphisms["tau"] = Vector<double>{{2.0, 3.0, 6.0}}.asDiagonal();
    p.automorphisms["tau_bad"] = Vector<double>{{2.0, 3.0, 1.0}}.asDiagonal();
    return p;
  }
  if (name == "solvable_rr2") {
    // [Z,X] = X, [Z,Y] = -Y, stored as [X,Z] = -X, [Y,Z] = Y
    auto p = make_catalog(name, {"X", "Y", "Z"}, {{0, 2, 0, -1.0}, {1, 2, 1, 1.0}}, Vector<double>{{1.0, 2.0, 3.0}});
    p.automorphisms["tau"] = Vector<double>{{2.0, 3.0, 1.0}}.asDiagonal();
    return p;
  }
  if (name == "su2") {
    // [X,Y] = Z, [Y,Z] = X, [Z,X] = Y
    return make_catalog(name, {"X", "Y", "Z"}, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {0, 2, 1, -1.0}},
                        Vector<double>::Ones(3));
  }
  if (name == "aff1") {
    // [X,Y] = Y
    auto p = make_catalog(name, {"X", "Y"}, {{0, 1, 1, 1.0}}, Vector<double>{{1.0, 2.0}});
    p.symplectic["w1"] = standard_form2();
    p.symplectic["w2"] = standard_form2();
    return p;
  }
  if (name == "abelian2") {
    auto p = make_catalog(name, {"X", "Y"}, {}, Vector<double>{{1.0, 2.0}});
    p.symplectic["w1"] = standard_form2();
    p.symplectic["w2"] = standard_form2();
    return p;
  }
  if (name == "abelian3") {
    return make_catalog(name, {"X", "Y", "Z"}, {}, Vector<double>{{1.0, 2.0, 3.0}});
  }
  throw UnknownCatalogEntry("unknown catalog entry '" + name + "'");
}

LieAlgebra<double> algebra_of(const ProblemFile& p) { return make_algebra(p.basis, p.brackets); }

Metric<double> metric_of(const ProblemFile& p, const std::string& name) {
  auto it = p.metrics.find(name);
  if (it == p.metrics.end()) throw ValidationError("metrics." + name, "metric not present");
  try {
    return Metric<double>(it->second);
  } catch (const NonPositiveDefinite& e) {
    throw ValidationError("metrics." + name, e.what());
  }
}

TwoForm<double> form_of(const ProblemFile& p, const std::string& name) {
  auto it = p.symplectic.find(name);
  if (it == p.symplectic.end()) throw ValidationError("symplectic." + name, "form not present");
  return TwoForm<double>(it->second);
}

Matrix<double> automorphism_of(const ProblemFile& p, const std::string& name) {
  auto it = p.automorphisms.find(name);
  if (it == p.automorphisms.end()) throw ValidationError("automorphisms." + name, "map not present");
  return it->second;
}

ProblemFile lift_problem(const ProblemFile& p, const TangentLieAlgebra<double>& t) {
  ProblemFile out;
  out.name = (p.name.empty() ? std::string("problem") : p.name) + "_tangent";
  out.dim = t.dim();
  out.basis = t.lifted().labels();
  const auto& c = t.lifted().constants();
  for (Index i = 0; i < out.dim; ++i)
    for (Index j = i + 1; j < out.dim; ++j)
      for (Index k = 0; k < out.dim; ++k)
        if (c(i, j, k) != 0.0) out.brackets.push_back({i, j, k, c(i, j, k)});
  out.metrics["g1"] = t.lifted_metric().matrix();
  out.metrics["g2"] = t.lifted_metric().matrix();

  const Index n = t.base_dim();
  out.extra["index_convention"] =
      "v<i> = X_i^v / sqrt(lambda_i) for i = 1..n, then c<i> = X_i^c; X_i = column i of 'frame' "
      "(g1-orthonormal eigenvectors of phi = g1^-1 g2, input coordinates); tensors row-major";
  out.extra["source"] = p.name;
  Json lambdas = Json::array();
  for (Index i = 0; i < n; ++i) lambdas.push_back(t.lambdas()(i));
  out.extra["lambdas"] = std::move(lambdas);
  out.extra["frame"] = matrix_json(t.phi_data().frame);
  out.extra["phi"] = matrix_json(t.phi_data().phi);
  out.extra["unnormalized_metric"] = matrix_json(lifted_metric_unnormalized(t.g1(), t.g2()));
  return out;
}

std::string dump(const Json& doc, int indent) {
  std::string out;
  write_json(doc, out, indent, 0);
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest(const ProblemFile& p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(dump(to_json(p), -1))));
  return buf;
}

}  // namespace tanglie::io
