#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tanglie/errors.hpp"
#include "tanglie/lie_core.hpp"
#include "tanglie/symplectic_lift.hpp"
#include "tanglie/tangent_lift.hpp"

namespace tanglie::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "tanglie/1";

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Schema-valid document whose content violates an invariant. `path()` names
/// the offending element, e.g. "brackets[2]" or "metrics.g2".
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class UnknownCatalogEntry : public Error {
 public:
  using Error::Error;
};

/// Malformed vector expression; `column()` is 1-based.
class ExprError : public Error {
 public:
  ExprError(std::size_t column, const std::string& message)
      : Error("column " + std::to_string(column) + ": " + message), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

struct ProblemFile {
  std::string name;
  Index dim = 0;
  std::vector<std::string> basis;
  std::vector<BracketEntry<double>> brackets;  ///< sparse, i < j
  std::map<std::string, Matrix<double>> metrics;
  std::map<std::string, Matrix<double>> symplectic;
  std::map<std::string, Matrix<double>> automorphisms;
  Json extra = Json::object();  ///< unrecognised top-level fields, passed through
};

/// Validates a parsed document: schema tag, index ranges, i < j bracket
/// orientation, square matrices, SPD metrics, antisymmetric forms, Jacobi.
ProblemFile parse_problem(const Json& doc, const Tolerances& tol = {});
ProblemFile load_problem(const std::filesystem::path& path, const Tolerances& tol = {});
Json to_json(const ProblemFile& problem);

const std::vector<std::string>& catalog_names();
ProblemFile catalog_algebra(const std::string& name);

LieAlgebra<double> algebra_of(const ProblemFile& problem);
Metric<double> metric_of(const ProblemFile& problem, const std::string& name);
TwoForm<double> form_of(const ProblemFile& problem, const std::string& name);
Matrix<double> automorphism_of(const ProblemFile& problem, const std::string& name);

/// Tangent algebra of the problem's "g1"/"g2" pair written as a problem file
/// (identity metrics in the normalized frame, plus eigen-data fields).
ProblemFile lift_problem(const ProblemFile& problem, const TangentLieAlgebra<double>& tangent);

/// Grammar: term (("+"|"-") term)*, term := [coef "*"] label ("^c"|"^v"),
/// coef a decimal literal. Vertical terms use the unnormalized X^v convention.
LiftedVector<double> parse_lifted_expr(const TangentLieAlgebra<double>& tangent, std::string_view text);

/// Same grammar without lift suffixes, giving a vector in input coordinates.
Vector<double> parse_base_expr(const LieAlgebra<double>& algebra, std::string_view text);

/// True if any term of the expression carries a "^c"/"^v" suffix.
bool is_lifted_expr(std::string_view text);

/// Serializes with every floating-point value printed to 17 significant digits.
std::string dump(const Json& doc, int indent = 2);

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest(const ProblemFile& problem);

}  // namespace tanglie::io
