#pragma once

#include "xcop/errors.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xcop {

class ParseError : public DomainError {
 public:
  ParseError(const std::string& message, std::size_t column);
  /// 1-based column of the offending character (one past the end for EOF).
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Integrand g over the transformed coordinates x1..xn.
class Objective {
 public:
  /// x1 * x2 * ... * xn.
  static Objective product();
  /// |x1 - x2|.
  static Objective abs_diff();
  /// 1 - |x1 - x2|/eps inside the band |x1 - x2| < eps, else 0.
  static Objective match_eps(double eps);
  /// Expression over x1..xn: + - * / ^ (left associative), unary minus,
  /// min(a,b) max(a,b) abs(a) exp(a) ln(a), numeric literals, parentheses.
  /// ^ binds tighter than unary minus, which binds tighter than * and /.
  static Objective parse(std::string_view text);
  /// A builtin name ("product", "abs_diff", "match_eps:EPS") or an expression.
  static Objective from_cli(std::string_view builtin);

  double operator()(std::span<const double> x) const;

  /// Smallest dimension the objective can be evaluated in.
  std::size_t min_arity() const noexcept { return min_arity_; }
  const std::string& describe() const noexcept { return text_; }

 private:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Min, Max, Abs, Exp, Ln, Product, AbsDiff, MatchEps };
  struct Node {
    Op op;
    double value = 0.0;
    std::size_t var = 0;
    int lhs = -1;
    int rhs = -1;
  };

  double eval(int node, std::span<const double> x) const;

  std::vector<Node> nodes_;
  int root_ = -1;
  std::size_t min_arity_ = 1;
  std::string text_;

  friend class ExpressionParser;
};

}  // namespace xcop
