#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace xcop {

struct UniformMarginal {
  double a = 0.0;
  double b = 1.0;
};

struct ExponentialMarginal {
  double rate = 1.0;
};

struct NormalMarginal {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Piecewise-linear quantile through (p_i, x_i); p runs from 0 to 1.
struct TabulatedQuantile {
  std::vector<double> p;
  std::vector<double> x;
};

class MarginalDistribution {
 public:
  using Kind = std::variant<UniformMarginal, ExponentialMarginal, NormalMarginal, TabulatedQuantile>;

  /// Validates parameters (a < b, rate > 0, sigma > 0, table shape).
  MarginalDistribution(Kind kind);

  static MarginalDistribution uniform(double a = 0.0, double b = 1.0) { return {UniformMarginal{a, b}}; }
  static MarginalDistribution exponential(double rate) { return {ExponentialMarginal{rate}}; }
  static MarginalDistribution normal(double mu, double sigma) { return {NormalMarginal{mu, sigma}}; }
  static MarginalDistribution tabulated(std::vector<double> p, std::vector<double> x) {
    return {TabulatedQuantile{std::move(p), std::move(x)}};
  }

  /// "uniform:a,b", "exp:rate", "normal:mu,sigma" or "table:path.csv" (two
  /// columns p,x with an optional header).
  static MarginalDistribution parse(std::string_view spec);

  const Kind& kind() const noexcept { return kind_; }
  std::string describe() const;

  /// F^{-1}(p) for p in (0,1).
  double quantile(double p) const;

 private:
  Kind kind_;
};

/// Standard normal quantile: rational approximation refined by one Halley step.
double standard_normal_quantile(double p);

}  // namespace xcop
