#include "xcop/objective.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace xcop {

ParseError::ParseError(const std::string& message, std::size_t column)
    : DomainError("parse error at column " + std::to_string(column) + ": " + message), column_(column) {}

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, Objective& out) : text_(text), out_(out) {}

  int parse() {
    int root = expression();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  using Op = Objective::Op;

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_ + 1); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  int node(Op op, int lhs = -1, int rhs = -1, double value = 0.0, std::size_t var = 0) {
    out_.nodes_.push_back({op, value, var, lhs, rhs});
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  int expression() {
    int lhs = term();
    while (true) {
      if (accept('+')) {
        lhs = node(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = node(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  int term() {
    int lhs = unary();
    while (true) {
      if (accept('*')) {
        lhs = node(Op::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = node(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  int unary() {
    if (accept('-')) return node(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  int power() {
    int lhs = primary();
    while (accept('^')) {
      // A signed exponent such as x1^-2 is accepted.
      int rhs;
      if (accept('-')) {
        rhs = node(Op::Neg, primary());
      } else {
        rhs = primary();
      }
      lhs = node(Op::Pow, lhs, rhs);
    }
    return lhs;
  }

  int primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (accept('(')) {
      int inner = expression();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  int number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return node(Op::Const, -1, -1, v);
  }

  int identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    if (name.size() > 1 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      const std::size_t k = std::stoul(name.substr(1));
      if (k == 0) {
        pos_ = start;
        fail("variables are numbered from x1");
      }
      out_.min_arity_ = std::max(out_.min_arity_, k);
      return node(Op::Var, -1, -1, 0.0, k - 1);
    }
    Op op;
    std::size_t arity;
    if (name == "min") {
      op = Op::Min, arity = 2;
    } else if (name == "max") {
      op = Op::Max, arity = 2;
    } else if (name == "abs") {
      op = Op::Abs, arity = 1;
    } else if (name == "exp") {
      op = Op::Exp, arity = 1;
    } else if (name == "ln") {
      op = Op::Ln, arity = 1;
    } else {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    expect('(');
    std::vector<int> args{expression()};
    while (accept(',')) args.push_back(expression());
    if (args.size() != arity) {
      fail(name + " takes " + std::to_string(arity) + " argument(s), got " + std::to_string(args.size()));
    }
    expect(')');
    return node(op, args[0], arity == 2 ? args[1] : -1);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Objective& out_;
};

Objective Objective::product() {
  Objective g;
  g.nodes_.push_back({Op::Product});
  g.root_ = 0;
  g.min_arity_ = 1;
  g.text_ = "product";
  return g;
}

Objective Objective::abs_diff() {
  Objective g;
  g.nodes_.push_back({Op::AbsDiff});
  g.root_ = 0;
  g.min_arity_ = 2;
  g.text_ = "abs_diff";
  return g;
}

Objective Objective::match_eps(double eps) {
  if (!(std::isfinite(eps) && eps > 0)) throw DomainError("match_eps needs eps > 0");
  Objective g;
  g.nodes_.push_back({Op::MatchEps, eps});
  g.root_ = 0;
  g.min_arity_ = 2;
  g.text_ = "match_eps:" + std::to_string(eps);
  return g;
}

Objective Objective::parse(std::string_view text) {
  Objective g;
  g.text_ = std::string(text);
  ExpressionParser p(text, g);
  g.root_ = p.parse();
  return g;
}

Objective Objective::from_cli(std::string_view builtin) {
  if (builtin == "product") return product();
  if (builtin == "abs_diff") return abs_diff();
  if (builtin.starts_with("match_eps:")) {
    const std::string eps(builtin.substr(10));
    char* end = nullptr;
    double v = std::strtod(eps.c_str(), &end);
    if (eps.empty() || *end != '\0') throw DomainError("bad epsilon in '" + std::string(builtin) + "'");
    return match_eps(v);
  }
  throw DomainError("unknown builtin objective '" + std::string(builtin) + "'");
}

double Objective::operator()(std::span<const double> x) const {
  if (x.size() < min_arity_) throw DomainError("objective needs at least " + std::to_string(min_arity_) + " variables");
  return eval(root_, x);
}

double Objective::eval(int i, std::span<const double> x) const {
  const Node& nd = nodes_[static_cast<std::size_t>(i)];
  switch (nd.op) {
    case Op::Const:
      return nd.value;
    case Op::Var:
      return x[nd.var];
    case Op::Add:
      return eval(nd.lhs, x) + eval(nd.rhs, x);
    case Op::Sub:
      return eval(nd.lhs, x) - eval(nd.rhs, x);
    case Op::Mul:
      return eval(nd.lhs, x) * eval(nd.rhs, x);
    case Op::Div:
      return eval(nd.lhs, x) / eval(nd.rhs, x);
    case Op::Pow:
      return std::pow(eval(nd.lhs, x), eval(nd.rhs, x));
    case Op::Neg:
      return -eval(nd.lhs, x);
    case Op::Min:
      return std::min(eval(nd.lhs, x), eval(nd.rhs, x));
    case Op::Max:
      return std::max(eval(nd.lhs, x), eval(nd.rhs, x));
    case Op::Abs:
      return std::abs(eval(nd.lhs, x));
    case Op::Exp:
      return std::exp(eval(nd.lhs, x));
    case Op::Ln:
      return std::log(eval(nd.lhs, x));
    case Op::Product: {
      double p = 1.0;
      for (double v : x) p *= v;
      return p;
    }
    case Op::AbsDiff:
      return std::abs(x[0] - x[1]);
    case Op::MatchEps: {
      const double d = std::abs(x[0] - x[1]);
      return d < nd.value ? 1.0 - d / nd.value : 0.0;
    }
  }
  return 0.0;
}

}  // namespace xcop
