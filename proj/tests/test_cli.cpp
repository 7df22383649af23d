#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "tanglie/cli.hpp"

using namespace tanglie;
using namespace testing_support;
using io::Json;

namespace {

const std::filesystem::path kSource = TANGLIE_SOURCE_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;

  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return (kSource / "tests" / "fixtures" / name).string(); }

const Json& check_named(const Json& report, const std::string& name) {
  for (const auto& c : report.at("checks")) {
    if (c.at("name") == name) return c;
  }
  throw std::runtime_error("no check named " + name);
}

}  // namespace

// ---------------------------------------------------------------------------
// Documented examples

TEST(Cli, HeisenbergSectional) {
  const auto r = run({"--json", "sectional", "heisenberg", "--plane", "Y^v,Z^v"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.json().at("result").at("sectional").get<double>(), 0.125, 1e-10);
}

TEST(Cli, SolvableSectional) {
  const auto r = run({"--json", "sectional", "solvable_rr2", "--plane", "Z^v,X^v"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.json().at("result").at("sectional").get<double>(), 1.0 / 12.0, 1e-10);
}

TEST(Cli, AbelianLiftConnectionIsZero) {
  const auto r = run({"--json", "connection", "abelian3", "--metric", "lift"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = r.json();
  const auto& c = doc.at("result").at("connection");
  EXPECT_EQ(c.at("shape"), Json::array({6, 6, 6}));
  ASSERT_EQ(c.at("data").size(), 216u);
  for (const auto& x : c.at("data")) EXPECT_EQ(x.get<double>(), 0.0);
}

TEST(Cli, HumanSectionalOutput) {
  const auto r = run({"sectional", "heisenberg", "--plane", "Y^v,Z^v"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.125"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("OK"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Subcommands

TEST(Cli, ConnectionMethodsAgree) {
  for (const auto& name : io::catalog_names()) {
    std::vector<Json> data;
    for (const char* method : {"koszul", "closed", "structconst"}) {
      const auto r = run({"--json", "connection", name, "--metric", "lift", "--method", method});
      ASSERT_EQ(r.code, 0) << name << " " << method << " " << r.err;
      data.push_back(r.json().at("result").at("connection").at("data"));
      EXPECT_TRUE(r.json().at("pass").get<bool>());
    }
    for (std::size_t i = 0; i < data[0].size(); ++i) {
      EXPECT_NEAR(data[1][i].get<double>(), data[0][i].get<double>(), 1e-8);
      EXPECT_NEAR(data[2][i].get<double>(), data[0][i].get<double>(), 1e-8);
    }
  }
}

TEST(Cli, BaseConnectionOnlyKoszul) {
  EXPECT_EQ(run({"connection", "heisenberg", "--metric", "g1"}).code, 0);
  EXPECT_EQ(run({"connection", "heisenberg", "--metric", "g1", "--method", "closed"}).code, 2);
  EXPECT_EQ(run({"connection", "heisenberg", "--metric", "g7"}).code, 2);
  EXPECT_EQ(run({"connection", "heisenberg", "--method", "fancy"}).code, 2);
}

TEST(Cli, CurvatureCompareGatesOnlyUniqueBlocks) {
  for (const auto& name : io::catalog_names()) {
    const auto r = run({"--json", "curvature", name, "--compare"});
    ASSERT_EQ(r.code, 0) << name << " " << r.err;
    const auto doc = r.json();
    EXPECT_TRUE(check_named(doc, "block ccc->c").at("pass").get<bool>());
    EXPECT_TRUE(check_named(doc, "block vvv->v").at("pass").get<bool>());
    EXPECT_TRUE(doc.at("residuals").contains("block vcv->c"));
  }
  // the solvable example deviates in the diagnostic blocks but still exits 0
  const auto s = run({"--json", "curvature", "solvable_rr2", "--compare"}).json();
  EXPECT_GT(s.at("residuals").at("block vcv->c").get<double>(), 1e-3);
}

TEST(Cli, CheckReportsResiduals) {
  const auto su = run({"--json", "check", "su2"});
  ASSERT_EQ(su.code, 0);
  EXPECT_EQ(su.json().at("residuals").at("bi_invariance:g1").get<double>(), 0.0);
  const auto h = run({"--json", "check", "heisenberg"}).json();
  EXPECT_GT(h.at("residuals").at("bi_invariance:g1").get<double>(), 0.1);
  EXPECT_EQ(h.at("result").at("center").size(), 1u);
}

TEST(Cli, FieldChecks) {
  const auto z = run({"--json", "field", "heisenberg", "--vector", "Z"});
  ASSERT_EQ(z.code, 0) << z.err;
  const auto doc = z.json();
  EXPECT_TRUE(doc.at("result").at("vertical_lift").at("killing").get<bool>());
  EXPECT_TRUE(doc.at("result").at("in_center").get<bool>());

  const auto x = run({"--json", "field", "solvable_rr2", "--vector", "X"}).json();
  EXPECT_FALSE(x.at("result").at("vertical_lift").at("killing").get<bool>());
  EXPECT_TRUE(x.at("pass").get<bool>());

  const auto lifted = run({"--json", "field", "heisenberg", "--vector", "Z^v + X^c"});
  EXPECT_EQ(lifted.code, 0) << lifted.err;
}

TEST(Cli, EquivExitCodes) {
  EXPECT_EQ(run({"equiv", "heisenberg", "--tau", "tau"}).code, 0);
  const auto both = run({"--json", "equiv", "heisenberg", "--tau", "tau", "--tau2", "tau"});
  ASSERT_EQ(both.code, 0);
  EXPECT_TRUE(check_named(both.json(), "lifted map is an automorphism").at("pass").get<bool>());
  const auto bad = run({"equiv", "heisenberg", "--tau", "tau_bad"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("check failed: automorphism:tau_bad"), std::string::npos);
  EXPECT_EQ(run({"equiv", "heisenberg", "--tau", "sigma"}).code, 2);
  EXPECT_EQ(run({"equiv", fixture("non_invertible_tau.json"), "--tau", "tau"}).code, 2);
}

TEST(Cli, SymplecticCommand) {
  for (const char* name : {"aff1", "abelian2"}) {
    const auto r = run({"--json", "symplectic", name});
    ASSERT_EQ(r.code, 0) << name << " " << r.err;
    EXPECT_GT(check_named(r.json(), "nondegenerate").at("residual").get<double>(), 1e-6);
  }
  const auto odd = run({"symplectic", "heisenberg"});
  EXPECT_EQ(odd.code, 2);
  EXPECT_NE(odd.err.find("not symplectic"), std::string::npos);
  EXPECT_EQ(run({"symplectic", fixture("degenerate_w2.json")}).code, 2);
  EXPECT_EQ(run({"symplectic", "aff1", "--w1", "nope"}).code, 2);
}

TEST(Cli, LiftOutputReloads) {
  const auto r = run({"lift", "solvable_rr2"});
  ASSERT_EQ(r.code, 0);
  const auto p = io::parse_problem(Json::parse(r.out));
  EXPECT_EQ(p.dim, 6);
  EXPECT_EQ(p.name, "solvable_rr2_tangent");
  EXPECT_TRUE(p.extra.contains("index_convention"));
  // the lifted file is itself a valid input
  const auto path = std::filesystem::temp_directory_path() / "tanglie_cli_lift_solvable.json";
  {
    std::ofstream f(path);
    f << r.out;
  }
  const auto again = run({"--json", "connection", path.string(), "--metric", "g1"});
  std::filesystem::remove(path);
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(again.json().at("result").at("connection").at("shape"), Json::array({6, 6, 6}));
}

TEST(Cli, FilePathAndCatalogNameAgree) {
  const auto a = run({"--json", "sectional", "heisenberg", "--plane", "Y^v,Z^v"}).json();
  const auto b =
      run({"--json", "sectional", (kSource / "data" / "heisenberg.json").string(), "--plane", "Y^v,Z^v"}).json();
  EXPECT_EQ(a.at("input"), b.at("input"));
  EXPECT_EQ(a.at("result"), b.at("result"));
}

// ---------------------------------------------------------------------------
// Determinism and flags

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands{
      {"check", "heisenberg"},
      {"connection", "solvable_rr2", "--metric", "lift"},
      {"curvature", "su2", "--compare"},
      {"sectional", "heisenberg", "--plane", "Y^v,Z^v"},
      {"lift", "heisenberg"},
      {"field", "solvable_rr2", "--vector", "Z"},
      {"equiv", "heisenberg", "--tau", "tau", "--tau2", "tau"},
      {"symplectic", "aff1"}};
  for (const auto& cmd : commands) {
    for (bool json : {false, true}) {
      auto args = cmd;
      if (json) args.insert(args.begin(), "--json");
      const auto first = run(args);
      const auto second = run(args);
      EXPECT_EQ(first.out, second.out) << cmd[0];
      EXPECT_EQ(first.code, second.code);
    }
  }
}

TEST(Cli, JsonReportShape) {
  const auto doc = run({"--json", "check", "heisenberg"}).json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"command", "args", "input", "tolerance", "result", "checks", "residuals",
                                            "pass"}));
  EXPECT_EQ(doc.at("command"), "check");
  EXPECT_EQ(doc.at("input").at("digest"), io::digest(io::catalog_algebra("heisenberg")));
}

TEST(Cli, ToleranceFlag) {
  const auto doc = run({"--json", "--tol", "1e-3", "check", "heisenberg"}).json();
  EXPECT_EQ(doc.at("tolerance").get<double>(), 1e-3);
  EXPECT_EQ(check_named(doc, "jacobi").at("threshold").get<double>(), 1e-3);
  // a loose tolerance turns the failing equivariance run into a pass
  EXPECT_EQ(run({"--tol", "100", "equiv", "heisenberg", "--tau", "tau_bad"}).code, 0);
  EXPECT_EQ(run({"--tol", "-1", "check", "heisenberg"}).code, 2);
  EXPECT_EQ(run({"--tol", "abc", "check", "heisenberg"}).code, 2);
}

// ---------------------------------------------------------------------------
// Exit-code contract

TEST(Cli, CorruptedFixturesExitTwo) {
  for (const char* name : {"both_orientations.json", "reversed_orientation.json", "non_spd_metric.json",
                           "asymmetric_metric.json", "malformed.json", "jacobi_violation.json", "bad_schema.json",
                           "wrong_shape.json", "index_out_of_range.json", "wrong_type.json"}) {
    const auto r = run({"check", fixture(name)});
    EXPECT_EQ(r.code, 2) << name;
    EXPECT_TRUE(r.out.empty()) << name;
    EXPECT_FALSE(r.err.empty()) << name;
  }
  const auto r = run({"check", fixture("non_spd_metric.json")});
  EXPECT_NE(r.err.find("metrics.g2"), std::string::npos) << r.err;
}

TEST(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate", "heisenberg"}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
  EXPECT_EQ(run({"check", "nope"}).code, 2);
  EXPECT_EQ(run({"check", "./missing.json"}).code, 2);
  EXPECT_EQ(run({"sectional", "heisenberg"}).code, 2);
  EXPECT_EQ(run({"sectional", "heisenberg", "--plane", "Y^w,Z^v"}).code, 2);
  EXPECT_EQ(run({"sectional", "heisenberg", "--plane", "Y^v"}).code, 2);
  EXPECT_EQ(run({"sectional", "heisenberg", "--plane", "X^v,2*X^v"}).code, 2);
  EXPECT_EQ(run({"field", "heisenberg", "--vector", "Q"}).code, 2);
  const auto expr = run({"sectional", "heisenberg", "--plane", "Y^v,Z^w"});
  EXPECT_NE(expr.err.find("column"), std::string::npos) << expr.err;
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sectional"), std::string::npos);
}
