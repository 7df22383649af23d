#include "tanglie/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "tanglie/io.hpp"
#include "tanglie/tanglie.hpp"

namespace tanglie::cli {

namespace {

using io::Json;

constexpr double kHumanDropBelow = 1e-13;

struct Check {
  std::string name;
  double residual;
  double threshold;
  bool pass;
  const char* comparison;
};

struct Report {
  std::string command;
  Json args = Json::object();
  Json input = Json::object();
  double tolerance = 1e-8;
  Json result = Json::object();
  std::vector<Check> checks;
  Json residuals = Json::object();

  void at_most(std::string name, double residual, double threshold) {
    checks.push_back({std::move(name), residual, threshold, residual <= threshold, "<="});
  }
  void above(std::string name, double value, double threshold) {
    checks.push_back({std::move(name), value, threshold, value > threshold, ">"});
  }
  void holds(std::string name, bool ok) { checks.push_back({std::move(name), ok ? 0.0 : 1.0, 0.0, ok, "holds"}); }

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

struct Options {
  bool json = false;
  double tol = 1e-8;
};

// ---------------------------------------------------------------------------
// JSON helpers

Json vector_json(const Vector<double>& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json matrix_json(const Matrix<double>& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

Json tensor_json(const double* data, std::vector<Index> shape, const std::vector<std::string>& labels,
                 std::string convention) {
  Index total = 1;
  for (Index s : shape) total *= s;
  Json out;
  out["shape"] = shape;
  out["index_convention"] = std::move(convention);
  out["labels"] = labels;
  out["data"] = Json::array();
  for (Index i = 0; i < total; ++i) out["data"].push_back(data[i]);
  return out;
}

Json connection_json(const Connection<double>& c, const std::vector<std::string>& labels) {
  const Index n = c.dim();
  return tensor_json(c.gamma.data().data(), {n, n, n}, labels,
                     "row-major [i][j][k]: coefficient of e_k in nabla_{e_i} e_j");
}

Json curvature_json(const CurvatureTensor<double>& r, const std::vector<std::string>& labels) {
  const Index n = r.dim();
  return tensor_json(r.r.data().data(), {n, n, n, n}, labels,
                     "row-major [i][j][k][h]: coefficient of e_h in R(e_i,e_j)e_k = "
                     "nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_[e_i,e_j] e_k");
}

Json field_json(const MetricFieldReport<double>& f) {
  return Json{{"killing", f.killing},
              {"conformal", f.conformal},
              {"rho", f.rho},
              {"killing_residual", f.killing_residual},
              {"conformal_residual", f.conformal_residual}};
}

const char* kLiftedConvention =
    "v<i> = X_i^v / sqrt(lambda_i) for i = 1..n, then c<i> = X_i^c, where X_i are the g1-orthonormal "
    "eigenvectors of phi = g1^-1 g2 listed in 'frame'";

// ---------------------------------------------------------------------------
// Human rendering

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

bool is_tensor(const Json& j) { return j.is_object() && j.contains("shape") && j.contains("data"); }

bool is_flat_array(const Json& j) {
  return j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
}

std::string scalar_text(const Json& j) {
  if (j.is_number_float()) return num(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void render(std::ostream& out, const std::string& key, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
  if (is_tensor(j)) {
    const auto shape = j["shape"].get<std::vector<Index>>();
    const auto labels = j["labels"].get<std::vector<std::string>>();
    const auto& data = j["data"];
    out << pad << key << ": tensor";
    for (Index s : shape) out << " " << s;
    out << ", " << j["index_convention"].get<std::string>() << "\n";
    std::size_t shown = 0;
    for (std::size_t flat = 0; flat < data.size(); ++flat) {
      const double v = data[flat].get<double>();
      if (std::abs(v) < kHumanDropBelow) continue;
      std::vector<std::string> idx(shape.size());
      std::size_t rest = flat;
      for (std::size_t d = shape.size(); d-- > 0;) {
        idx[d] = labels[rest % static_cast<std::size_t>(shape[d])];
        rest /= static_cast<std::size_t>(shape[d]);
      }
      out << pad << "  [";
      for (std::size_t d = 0; d < idx.size(); ++d) out << (d ? ", " : "") << idx[d];
      out << "] " << num(v) << "\n";
      ++shown;
    }
    if (shown == 0) out << pad << "  (all entries below " << num(kHumanDropBelow) << ")\n";
    return;
  }
  if (j.is_object()) {
    out << pad << key << ":\n";
    for (const auto& [k, v] : j.items()) render(out, k, v, depth + 1);
    return;
  }
  if (is_flat_array(j)) {
    out << pad << key << ": [";
    for (std::size_t i = 0; i < j.size(); ++i) out << (i ? ", " : "") << scalar_text(j[i]);
    out << "]\n";
    return;
  }
  if (j.is_array()) {
    out << pad << key << ":\n";
    for (std::size_t i = 0; i < j.size(); ++i) render(out, "[" + std::to_string(i) + "]", j[i], depth + 1);
    return;
  }
  out << pad << key << ": " << scalar_text(j) << "\n";
}

void emit(const Report& r, const Options& opt, std::ostream& out) {
  if (opt.json) {
    Json doc;
    doc["command"] = r.command;
    doc["args"] = r.args;
    doc["input"] = r.input;
    doc["tolerance"] = r.tolerance;
    doc["result"] = r.result;
    Json checks = Json::array();
    for (const auto& c : r.checks) {
      checks.push_back(Json{{"name", c.name},
                            {"residual", c.residual},
                            {"threshold", c.threshold},
                            {"comparison", c.comparison},
                            {"pass", c.pass}});
    }
    doc["checks"] = std::move(checks);
    doc["residuals"] = r.residuals;
    doc["pass"] = r.passed();
    out << io::dump(doc) << "\n";
    return;
  }
  out << r.command;
  if (r.input.contains("name")) out << " " << r.input["name"].get<std::string>();
  if (r.input.contains("digest")) out << " (" << r.input["digest"].get<std::string>() << ")";
  out << "\n";
  for (const auto& [k, v] : r.result.items()) render(out, k, v, 0);
  if (!r.checks.empty()) {
    out << "checks (tolerance " << num(r.tolerance) << "):\n";
    for (const auto& c : r.checks) {
      out << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
      if (std::string(c.comparison) != "holds") out << "  " << num(c.residual) << " " << c.comparison << " " << num(c.threshold);
      out << "\n";
    }
  }
  if (!r.residuals.empty()) {
    out << "residuals:\n";
    for (const auto& [k, v] : r.residuals.items()) render(out, k, v, 1);
  }
  out << (r.passed() ? "OK" : "CHECK FAILED") << "\n";
}

// ---------------------------------------------------------------------------
// Command context

io::ProblemFile resolve_input(const std::string& arg, const Tolerances& tol) {
  if (std::filesystem::exists(arg)) return io::load_problem(arg, tol);
  const auto& names = io::catalog_names();
  if (std::find(names.begin(), names.end(), arg) != names.end()) return io::catalog_algebra(arg);
  if (arg.find('/') != std::string::npos || arg.ends_with(".json")) {
    throw io::ParseError(arg + ": cannot open file");
  }
  throw io::UnknownCatalogEntry("'" + arg + "' is neither a file nor a catalog entry (known: heisenberg, "
                                "solvable_rr2, su2, aff1, abelian2, abelian3)");
}

struct Context {
  io::ProblemFile problem;
  LieAlgebra<double> algebra;
  Report report;
  Options opt;

  TangentLieAlgebra<double> tangent() const {
    return build_tangent(algebra, io::metric_of(problem, "g1"), io::metric_of(problem, "g2"));
  }
};

Context open(const std::string& command, const std::string& file, const Options& opt) {
  Tolerances tol;
  auto problem = resolve_input(file, tol);
  auto algebra = io::algebra_of(problem);
  Context ctx{std::move(problem), std::move(algebra), {}, opt};
  ctx.report.command = command;
  ctx.report.tolerance = opt.tol;
  ctx.report.args["file"] = file;
  ctx.report.input = Json{{"name", ctx.problem.name}, {"digest", io::digest(ctx.problem)}};
  return ctx;
}

void require_metric_name(const std::string& metric) {
  if (metric != "g1" && metric != "g2" && metric != "lift") {
    throw io::ValidationError("--metric", "expected g1, g2 or lift, got '" + metric + "'");
  }
}

// ---------------------------------------------------------------------------
// Subcommands

void cmd_check(Context& ctx) {
  auto& r = ctx.report;
  const double tol = ctx.opt.tol;
  const double jacobi = jacobi_defect(ctx.algebra);
  r.result["dim"] = ctx.problem.dim;
  r.result["basis"] = ctx.problem.basis;
  r.result["jacobi_defect"] = jacobi;
  r.at_most("jacobi", jacobi, tol);

  Json center_json = Json::array();
  for (const auto& z : center(ctx.algebra, 1e-9)) center_json.push_back(vector_json(z));
  r.result["center"] = std::move(center_json);

  Json metrics = Json::object();
  for (const auto& [name, g] : ctx.problem.metrics) {
    const Metric<double> metric = io::metric_of(ctx.problem, name);
    const MetricLieAlgebra<double> m(ctx.algebra, metric);
    const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix<double>>(metric.matrix()).eigenvalues().minCoeff();
    const double bi = bi_invariance_defect(m);
    const double canonical = canonical_metricity_defect(m);
    const double doubles = double_bracket_defect(m);
    metrics[name] = Json{{"min_eigenvalue", min_eig},
                         {"bi_invariant", bi <= tol},
                         {"canonical_metric", canonical <= tol},
                         {"double_bracket_condition", doubles <= tol}};
    r.above("spd:" + name, min_eig, 0.0);
    r.residuals["bi_invariance:" + name] = bi;
    r.residuals["canonical_metricity:" + name] = canonical;
    r.residuals["double_bracket:" + name] = doubles;
  }
  r.result["metrics"] = std::move(metrics);
}

void cmd_connection(Context& ctx, const std::string& metric, const std::string& method) {
  auto& r = ctx.report;
  const double tol = ctx.opt.tol;
  require_metric_name(metric);
  r.args["metric"] = metric;
  r.args["method"] = method;
  if (method != "koszul" && method != "closed" && method != "structconst") {
    throw io::ValidationError("--method", "expected koszul, closed or structconst, got '" + method + "'");
  }
  if (metric != "lift") {
    if (method != "koszul") {
      throw io::ValidationError("--method", "method '" + method + "' only applies to --metric lift");
    }
    const MetricLieAlgebra<double> m(ctx.algebra, io::metric_of(ctx.problem, metric));
    const auto conn = levi_civita(m);
    r.result["connection"] = connection_json(conn, ctx.algebra.labels());
    r.at_most("torsion_free", torsion_defect(m, conn), tol);
    r.at_most("metric_compatible", metric_compatibility_defect(m, conn), tol);
    return;
  }
  const auto t = ctx.tangent();
  const auto m = t.lifted_metric_algebra();
  const auto koszul = levi_civita(m);
  Connection<double> conn = koszul;
  if (method == "closed") conn = lifted_connection_closed_form(t);
  if (method == "structconst") conn = lifted_connection_structure_constants(t);
  r.result["lambdas"] = vector_json(t.lambdas());
  r.result["frame"] = matrix_json(t.phi_data().frame);
  r.result["basis_convention"] = kLiftedConvention;
  r.result["connection"] = connection_json(conn, t.lifted().labels());
  r.at_most("torsion_free", torsion_defect(m, conn), tol);
  r.at_most("metric_compatible", metric_compatibility_defect(m, conn), tol);
  if (method != "koszul") {
    r.at_most("agrees_with_koszul", (conn.gamma.flat() - koszul.gamma.flat()).cwiseAbs().maxCoeff(), tol);
  }
}

void cmd_curvature(Context& ctx, const std::string& metric, bool compare) {
  auto& r = ctx.report;
  const double tol = ctx.opt.tol;
  require_metric_name(metric);
  r.args["metric"] = metric;
  r.args["compare"] = compare;
  if (compare && metric != "lift") throw io::ValidationError("--compare", "block comparison needs --metric lift");

  auto finish = [&](const MetricLieAlgebra<double>& m, const CurvatureTensor<double>& curv,
                    const std::vector<std::string>& labels) {
    r.result["curvature"] = curvature_json(curv, labels);
    r.at_most("antisymmetry", curvature_antisymmetry_defect(curv), tol);
    r.at_most("first_bianchi", first_bianchi_defect(curv), tol);
    r.at_most("pair_symmetry", pair_symmetry_defect(m, curv), tol);
  };
  if (metric != "lift") {
    const MetricLieAlgebra<double> m(ctx.algebra, io::metric_of(ctx.problem, metric));
    finish(m, curvature(m, levi_civita(m)), ctx.algebra.labels());
    return;
  }
  const auto t = ctx.tangent();
  const auto m = t.lifted_metric_algebra();
  const auto lifted = lifted_curvature(t);
  r.result["lambdas"] = vector_json(t.lambdas());
  r.result["frame"] = matrix_json(t.phi_data().frame);
  r.result["basis_convention"] = kLiftedConvention;
  finish(m, lifted.tensor, t.lifted().labels());
  if (!compare) return;

  // Blocks (1) and (6) have a unique literal reading and are gated; the rest
  // are reported for inspection only.
  Json table = Json::object();
  for (std::size_t b = 0; b < curvature_block_names.size(); ++b) {
    const std::string name = curvature_block_names[b];
    const double dev = lifted.block_deviation[b];
    const bool gated = b == 0 || b == 5;
    table[name] = Json{{"max_deviation", dev}, {"gated", gated}};
    if (gated) {
      r.at_most("block " + name, dev, tol);
    } else {
      r.residuals["block " + name] = dev;
    }
  }
  r.result["block_comparison"] = std::move(table);
}

std::pair<LiftedVector<double>, LiftedVector<double>> parse_plane(const TangentLieAlgebra<double>& t,
                                                                   const std::string& plane) {
  const auto comma = plane.find(',');
  if (comma == std::string::npos) throw io::ExprError(plane.size() + 1, "expected two expressions separated by ','");
  auto first = io::parse_lifted_expr(t, std::string_view(plane).substr(0, comma));
  try {
    auto second = io::parse_lifted_expr(t, std::string_view(plane).substr(comma + 1));
    return {first, second};
  } catch (const io::ExprError& e) {
    const std::string what = e.what();
    throw io::ExprError(e.column() + comma + 1, what.substr(what.find(": ") + 2));
  }
}

void cmd_sectional(Context& ctx, const std::string& plane) {
  auto& r = ctx.report;
  r.args["plane"] = plane;
  const auto t = ctx.tangent();
  const auto [u, v] = parse_plane(t, plane);
  const double k = lifted_sectional(t, u, v);
  r.result["sectional"] = k;
  r.result["u"] = vector_json(u.coeffs());
  r.result["v"] = vector_json(v.coeffs());
  r.result["basis"] = t.lifted().labels();
  r.result["basis_convention"] = kLiftedConvention;
}

void cmd_field(Context& ctx, const std::string& expr) {
  auto& r = ctx.report;
  const double tol = ctx.opt.tol;
  r.args["vector"] = expr;
  const auto t = ctx.tangent();
  const auto lifted = t.lifted_metric_algebra();
  const auto lifted_conn = levi_civita(lifted);

  auto lifted_report = [&](const LiftedVector<double>& w) {
    Json j = field_json(classify_for_metric(lifted, w.coeffs(), tol));
    j["geodesic"] = is_geodesic_vector(lifted, lifted_conn, w.coeffs(), tol);
    j["geodesic_residual"] = geodesic_defect(lifted, lifted_conn, w.coeffs());
    return j;
  };

  if (io::is_lifted_expr(expr)) {
    const auto w = io::parse_lifted_expr(t, expr);
    r.result["lifted"] = lifted_report(w);
    r.result["coefficients"] = vector_json(w.coeffs());
    r.result["basis"] = t.lifted().labels();
    return;
  }

  const Vector<double> x = io::parse_base_expr(ctx.algebra, expr);
  const MetricLieAlgebra<double> m1(ctx.algebra, t.g1());
  const MetricLieAlgebra<double> m2(ctx.algebra, t.g2());
  const auto cls = classify_field(m1, m2, x, tol);
  const double geo1 = geodesic_defect(m1, levi_civita(m1), x);
  const double geo2 = geodesic_defect(m2, levi_civita(m2), x);
  const auto xc = LiftedVector<double>::complete(t, x);
  const auto xv = LiftedVector<double>::vertical(t, x);
  const auto xc_cls = classify_for_metric(lifted, xc.coeffs(), tol);
  const auto xv_cls = classify_for_metric(lifted, xv.coeffs(), tol);
  const double xc_geo = geodesic_defect(lifted, lifted_conn, xc.coeffs());
  const double xv_geo = geodesic_defect(lifted, lifted_conn, xv.coeffs());

  Json g1 = field_json(cls.first);
  g1["geodesic"] = geo1 <= tol;
  Json g2 = field_json(cls.second);
  g2["geodesic"] = geo2 <= tol;
  r.result["vector"] = vector_json(x);
  r.result["g1"] = std::move(g1);
  r.result["g2"] = std::move(g2);
  r.result["in_center"] = cls.in_center;
  r.result["complete_lift"] = lifted_report(xc);
  r.result["vertical_lift"] = lifted_report(xv);

  r.holds("complete lift conformal iff conformal for g1 and g2",
          (cls.first.conformal && cls.second.conformal) == xc_cls.conformal);
  r.holds("vertical lift Killing iff central", xv_cls.killing == cls.in_center);
  r.holds("g1-geodesic implies complete lift geodesic", geo1 > tol || xc_geo <= tol);
  r.holds("g2-geodesic implies vertical lift geodesic", geo2 > tol || xv_geo <= tol);
  r.residuals["center"] = cls.center_residual;
  r.residuals["geodesic:g1"] = geo1;
  r.residuals["geodesic:g2"] = geo2;
  r.residuals["geodesic:complete_lift"] = xc_geo;
  r.residuals["geodesic:vertical_lift"] = xv_geo;
}

void cmd_equiv(Context& ctx, const std::string& tau_name, const std::optional<std::string>& tau2_name) {
  auto& r = ctx.report;
  const double tol = ctx.opt.tol;
  r.args["tau"] = tau_name;
  if (tau2_name) r.args["tau2"] = *tau2_name;
  const Matrix<double> tau = io::automorphism_of(ctx.problem, tau_name);
  const double auto_defect = automorphism_defect(ctx.algebra, tau);
  r.at_most("automorphism:" + tau_name, auto_defect, tol);
  if (Eigen::FullPivLU<Matrix<double>>(tau).rank() < tau.rows()) {
    throw io::ValidationError("automorphisms." + tau_name, "map is singular");
  }

  Json per_metric = Json::object();
  for (const auto& [name, g] : ctx.problem.metrics) {
    const Metric<double> metric = io::metric_of(ctx.problem, name);
    const MetricLieAlgebra<double> m(ctx.algebra, metric);
    const MetricLieAlgebra<double> primed(ctx.algebra, pullback_metric(metric, tau));
    const auto d = equivariance_defect(m, primed, tau, tol);
    per_metric[name] = Json{{"connection", d.connection}, {"curvature", d.curvature}, {"sectional", d.sectional}};
    r.at_most("connection equivariance:" + name, d.connection, tol);
    r.at_most("curvature equivariance:" + name, d.curvature, tol);
    r.at_most("sectional equivariance:" + name, d.sectional, tol);
  }
  r.result["defects"] = std::move(per_metric);
  if (!tau2_name) return;

  const Matrix<double> tau2 = io::automorphism_of(ctx.problem, *tau2_name);
  const double auto2 = automorphism_defect(ctx.algebra, tau2);
  const Matrix<double> big = lift_automorphism(tau, tau2);
  const double pullback = lifted_pullback_defect(io::metric_of(ctx.problem, "g1"), io::metric_of(ctx.problem, "g2"),
                                                 tau, tau2);
  const double lifted_auto = automorphism_defect(lifted_algebra_unnormalized(ctx.algebra), big);
  r.result["lifted_map"] = matrix_json(big);
  r.result["lifted_map_convention"] = "blockdiag(tau2, tau1) on {X_1^v..X_n^v, X_1^c..X_n^c}";
  if (*tau2_name != tau_name) r.at_most("automorphism:" + *tau2_name, auto2, tol);
  r.at_most("lifted pullback identity", pullback, tol);
  r.at_most("lifted map is an automorphism", lifted_auto, tol);
}

void cmd_symplectic(Context& ctx, const std::string& w1_name, const std::string& w2_name) {
  auto& r = ctx.report;
  const double tol = ctx.opt.tol;
  r.args["w1"] = w1_name;
  r.args["w2"] = w2_name;
  if (ctx.problem.dim % 2 != 0) {
    throw NotSymplecticInput("odd-dimensional algebra (dim " + std::to_string(ctx.problem.dim) +
                             ") carries no symplectic form");
  }
  const auto w1 = io::form_of(ctx.problem, w1_name);
  const auto w2 = io::form_of(ctx.problem, w2_name);
  const auto t = ctx.tangent();
  const auto lifted = lift_symplectic(t, w1, w2, tol);
  const auto patterns = verify_closedness_identities(t, lifted);
  const double sigma = smallest_singular_value(lifted);

  r.result["form"] = tensor_json(lifted.matrix().transpose().eval().data(), {t.dim(), t.dim()},
                                 t.lifted().labels(), "row-major [i][j]: omega(e_i, e_j)");
  r.result["smallest_singular_value"] = sigma;
  r.result["basis_convention"] = kLiftedConvention;
  Json pattern_json = Json::object();
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    pattern_json[closedness_pattern_names[p]] = patterns[p];
    r.at_most(std::string("closedness ") + closedness_pattern_names[p], patterns[p], tol);
  }
  r.result["closedness"] = std::move(pattern_json);
  r.at_most("lifted cocycle", cocycle_defect(t.lifted(), lifted), tol);
  r.above("nondegenerate", sigma, tol);
  r.residuals["cocycle:" + w1_name] = cocycle_defect(ctx.algebra, w1);
  r.residuals["cocycle:" + w2_name] = cocycle_defect(ctx.algebra, w2);
}

int input_error(std::ostream& err, const std::string& kind, const std::string& what) {
  err << "tanglie: " << kind << ": " << what << "\n";
  return kInputError;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Left-invariant geometry of tangent Lie algebras", "tanglie"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_flag("--json", opt.json, "Emit the report as JSON");
  app.add_option("--tol", opt.tol, "Check tolerance")->check(CLI::PositiveNumber);

  std::string file;
  std::string metric = "lift";
  std::string method = "koszul";
  std::string plane;
  std::string vector;
  std::string tau;
  std::string tau2;
  std::string w1 = "w1";
  std::string w2 = "w2";
  bool compare = false;

  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", file, "Problem file or catalog name")->required();
    return sub;
  };
  auto* check = add("check", "Jacobi, metric and bi-invariance checks");
  auto* connection = add("connection", "Levi-Civita connection tensor");
  connection->add_option("--metric", metric, "g1, g2 or lift")->capture_default_str();
  connection->add_option("--method", method, "koszul, closed or structconst")->capture_default_str();
  auto* curvature = add("curvature", "Curvature tensor");
  curvature->add_option("--metric", metric, "g1, g2 or lift")->capture_default_str();
  curvature->add_flag("--compare", compare, "Compare against the structure-constant block formulas");
  auto* sectional = add("sectional", "Sectional curvature of a lifted plane");
  sectional->add_option("--plane", plane, "Two lifted expressions, e.g. \"Y^v,Z^v\"")->required();
  auto* lift = add("lift", "Emit the tangent algebra as a problem file");
  auto* field = add("field", "Killing / conformal / geodesic classification");
  field->add_option("--vector", vector, "Base expression (e.g. \"X+2*Z\") or lifted expression")->required();
  auto* equiv = add("equiv", "Equivariance under automorphisms");
  auto* tau_opt = equiv->add_option("--tau", tau, "Automorphism name")->required();
  auto* tau2_opt = equiv->add_option("--tau2", tau2, "Second automorphism for the lifted map");
  auto* symplectic = add("symplectic", "Lift a pair of symplectic forms");
  symplectic->add_option("--w1", w1, "First form name")->capture_default_str();
  symplectic->add_option("--w2", w2, "Second form name")->capture_default_str();
  (void)tau_opt;

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    return input_error(err, "usage", e.what());
  }

  try {
    auto* sub = app.get_subcommands().front();
    Context ctx = open(sub->get_name(), file, opt);
    if (sub == lift) {
      out << io::dump(io::to_json(io::lift_problem(ctx.problem, ctx.tangent()))) << "\n";
      return kOk;
    }
    if (sub == check) cmd_check(ctx);
    if (sub == connection) cmd_connection(ctx, metric, method);
    if (sub == curvature) cmd_curvature(ctx, metric, compare);
    if (sub == sectional) cmd_sectional(ctx, plane);
    if (sub == field) cmd_field(ctx, vector);
    if (sub == equiv) cmd_equiv(ctx, tau, tau2_opt->count() ? std::optional<std::string>(tau2) : std::nullopt);
    if (sub == symplectic) cmd_symplectic(ctx, w1, w2);
    emit(ctx.report, opt, out);
    if (!ctx.report.passed()) {
      for (const auto& c : ctx.report.checks) {
        if (!c.pass) err << "tanglie: check failed: " << c.name << " (residual " << num(c.residual) << ")\n";
      }
      return kCheckFailed;
    }
    return kOk;
  } catch (const io::ParseError& e) {
    return input_error(err, "parse error", e.what());
  } catch (const io::ValidationError& e) {
    return input_error(err, "validation error", e.what());
  } catch (const io::UnknownCatalogEntry& e) {
    return input_error(err, "unknown catalog entry", e.what());
  } catch (const io::ExprError& e) {
    return input_error(err, "expression error", e.what());
  } catch (const NotSymplecticInput& e) {
    return input_error(err, "not symplectic", e.what());
  } catch (const DegeneratePlane& e) {
    return input_error(err, "degenerate plane", e.what());
  } catch (const Error& e) {
    return input_error(err, "error", e.what());
  }
}

}  // namespace tanglie::cli
