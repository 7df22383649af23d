#include <cctype>
#include <charconv>

#include "tanglie/io.hpp"

namespace tanglie::io {

namespace {

enum class Suffix { none, complete, vertical };

struct Term {
  double coef;
  std::string label;
  Suffix suffix;
  std::size_t column;
};

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  std::vector<Term> parse() {
    std::vector<Term> terms;
    skip_space();
    if (at_end()) fail("empty expression");
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    terms.push_back(term(sign));
    while (true) {
      skip_space();
      if (at_end()) break;
      const char op = peek();
      if (op != '+' && op != '-') fail(std::string("expected '+' or '-', found '") + op + "'");
      ++pos_;
      terms.push_back(term(op == '-' ? -1.0 : 1.0));
    }
    return terms;
  }

 private:
  Term term(double sign) {
    skip_space();
    if (at_end()) fail("expected a term");
    Term t{sign, {}, Suffix::none, pos_ + 1};
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      t.coef *= number();
      skip_space();
      if (at_end() || peek() != '*') fail("expected '*' after coefficient");
      ++pos_;
      skip_space();
    }
    if (at_end() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) fail("expected a basis label");
    t.column = pos_ + 1;
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    t.label = std::string(text_.substr(start, pos_ - start));
    if (!at_end() && peek() == '^') {
      ++pos_;
      if (at_end()) fail("expected 'c' or 'v' after '^'");
      if (peek() == 'c') {
        t.suffix = Suffix::complete;
      } else if (peek() == 'v') {
        t.suffix = Suffix::vertical;
      } else {
        fail("expected 'c' or 'v' after '^'");
      }
      ++pos_;
      if (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
        fail("unexpected character after lift suffix");
      }
    }
    return t;
  }

  double number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      ++pos_;
      if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail("malformed number");
    }
    return value;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  [[noreturn]] void fail(const std::string& message) const { throw ExprError(pos_ + 1, message); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Index resolve(const LieAlgebra<double>& a, const Term& t) {
  auto idx = a.index_of(t.label);
  if (!idx) throw ExprError(t.column, "unknown basis label '" + t.label + "'");
  return *idx;
}

}  // namespace

LiftedVector<double> parse_lifted_expr(const TangentLieAlgebra<double>& tangent, std::string_view text) {
  const auto& algebra = tangent.input();
  const Index n = algebra.dim();
  Vector<double> complete = Vector<double>::Zero(n);
  Vector<double> vertical = Vector<double>::Zero(n);
  for (const auto& t : ExprParser(text).parse()) {
    if (t.suffix == Suffix::none) throw ExprError(t.column, "term '" + t.label + "' needs a '^c' or '^v' suffix");
    const Index i = resolve(algebra, t);
    (t.suffix == Suffix::complete ? complete : vertical)(i) += t.coef;
  }
  return LiftedVector<double>::from_parts(tangent, complete, vertical);
}

Vector<double> parse_base_expr(const LieAlgebra<double>& algebra, std::string_view text) {
  Vector<double> x = Vector<double>::Zero(algebra.dim());
  for (const auto& t : ExprParser(text).parse()) {
    if (t.suffix != Suffix::none) throw ExprError(t.column, "lift suffix not allowed in a base expression");
    x(resolve(algebra, t)) += t.coef;
  }
  return x;
}

bool is_lifted_expr(std::string_view text) { return text.find('^') != std::string_view::npos; }

}  // namespace tanglie::io
