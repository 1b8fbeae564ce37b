#include "xcop/marginals.hpp"

#include "xcop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace xcop {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> parse_numbers(std::string_view text, std::size_t expected, std::string_view what) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw DomainError("bad number '" + item + "' in " + std::string(what));
    }
    if (used != item.size()) throw DomainError("bad number '" + item + "' in " + std::string(what));
    out.push_back(v);
  }
  if (out.size() != expected) {
    throw DomainError(std::string(what) + " expects " + std::to_string(expected) + " parameter(s)");
  }
  return out;
}

TabulatedQuantile read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open quantile table " + path);
  TabulatedQuantile t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError(path + ":" + std::to_string(lineno) + ": expected p,x");
    try {
      std::size_t u1 = 0, u2 = 0;
      std::string ps = line.substr(0, comma), xs = line.substr(comma + 1);
      double p = std::stod(ps, &u1);
      double x = std::stod(xs, &u2);
      t.p.push_back(p);
      t.x.push_back(x);
    } catch (const std::exception&) {
      if (t.p.empty() && lineno == 1) continue;  // header
      throw DomainError(path + ":" + std::to_string(lineno) + ": expected p,x");
    }
  }
  return t;
}

}  // namespace

MarginalDistribution::MarginalDistribution(Kind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [](const UniformMarginal& u) {
                   if (!(std::isfinite(u.a) && std::isfinite(u.b) && u.a < u.b))
                     throw DomainError("uniform marginal needs a < b");
                 },
                 [](const ExponentialMarginal& e) {
                   if (!(std::isfinite(e.rate) && e.rate > 0)) throw DomainError("exponential rate must be positive");
                 },
                 [](const NormalMarginal& n) {
                   if (!(std::isfinite(n.mu) && std::isfinite(n.sigma) && n.sigma > 0))
                     throw DomainError("normal sigma must be positive");
                 },
                 [](const TabulatedQuantile& t) {
                   if (t.p.size() != t.x.size() || t.p.size() < 2)
                     throw DomainError("quantile table needs at least two (p,x) rows");
                   if (t.p.front() != 0.0 || t.p.back() != 1.0)
                     throw DomainError("quantile table must start at p=0 and end at p=1");
                   for (std::size_t i = 0; i + 1 < t.p.size(); ++i) {
                     if (!(t.p[i] < t.p[i + 1])) throw DomainError("quantile table p must be strictly increasing");
                     if (!(t.x[i] <= t.x[i + 1])) throw DomainError("quantile table x must be non-decreasing");
                   }
                   for (double x : t.x)
                     if (!std::isfinite(x)) throw DomainError("quantile table x must be finite");
                 },
             },
             kind_);
}

MarginalDistribution MarginalDistribution::parse(std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw DomainError("marginal spec must look like name:params");
  std::string_view name = spec.substr(0, colon);
  std::string_view args = spec.substr(colon + 1);
  if (name == "uniform") {
    auto v = parse_numbers(args, 2, "uniform");
    return uniform(v[0], v[1]);
  }
  if (name == "exp") return exponential(parse_numbers(args, 1, "exp")[0]);
  if (name == "normal") {
    auto v = parse_numbers(args, 2, "normal");
    return normal(v[0], v[1]);
  }
  if (name == "table") return {read_table(std::string(args))};
  throw DomainError("unknown marginal '" + std::string(name) + "'");
}

std::string MarginalDistribution::describe() const {
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  return std::visit(Overloaded{
                        [&](const UniformMarginal& u) { return "uniform:" + num(u.a) + "," + num(u.b); },
                        [&](const ExponentialMarginal& e) { return "exp:" + num(e.rate); },
                        [&](const NormalMarginal& n) { return "normal:" + num(n.mu) + "," + num(n.sigma); },
                        [&](const TabulatedQuantile& t) { return "table[" + std::to_string(t.p.size()) + "]"; },
                    },
                    kind_);
}

double MarginalDistribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile argument must lie in (0,1)");
  return std::visit(Overloaded{
                        [&](const UniformMarginal& u) { return u.a + p * (u.b - u.a); },
                        [&](const ExponentialMarginal& e) { return -std::log1p(-p) / e.rate; },
                        [&](const NormalMarginal& n) { return n.mu + n.sigma * standard_normal_quantile(p); },
                        [&](const TabulatedQuantile& t) {
                          auto it = std::upper_bound(t.p.begin(), t.p.end(), p);
                          std::size_t hi = static_cast<std::size_t>(it - t.p.begin());
                          std::size_t lo = hi - 1;
                          double w = (p - t.p[lo]) / (t.p[hi] - t.p[lo]);
                          return t.x[lo] + w * (t.x[hi] - t.x[lo]);
                        },
                    },
                    kind_);
}

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile argument must lie in (0,1)");
  // 1 - p is exact here, and the refinement below is accurate in the lower tail.
  if (p > 0.5) return -standard_normal_quantile(1.0 - p);
  // Acklam's coefficients.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  }
  // Halley refinement against the exact CDF.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

}  // namespace xcop
