#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oplip/core.hpp"

namespace oplip {

// Evaluable f: R -> C with a declared Lipschitz bound ||f||_Lip1.
//
// Optional metadata lets quadratures treat f well: `breakpoints` lists the
// points where f may fail to be smooth, `derivative` gives f' where it is
// known, and `decay_radius` R says f vanishes to working precision outside
// [-R, R].
class ScalarFunction {
 public:
  using Evaluator = std::function<Complex(double)>;

  ScalarFunction(std::string label, Evaluator evaluator, double lip_bound);

  Complex operator()(double t) const { return (*evaluator_)(t); }

  const std::string& label() const { return label_; }
  double lip_bound() const { return lip_bound_; }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  ScalarFunction with_breakpoints(std::vector<double> points) const;

  bool has_derivative() const { return derivative_ != nullptr; }
  Complex derivative(double t) const;
  ScalarFunction with_derivative(Evaluator derivative) const;

  std::optional<double> decay_radius() const { return decay_radius_; }
  ScalarFunction with_decay_radius(double radius) const;

  // c * f, with the Lipschitz bound scaled by |c|.
  ScalarFunction scaled(double c) const;

 private:
  std::string label_;
  std::shared_ptr<const Evaluator> evaluator_;
  std::shared_ptr<const Evaluator> derivative_;
  double lip_bound_;
  std::vector<double> breakpoints_;
  std::optional<double> decay_radius_;
};

// Largest |f(a) - f(b)| / |a - b| over `pairs` seeded random pairs in [lo, hi].
double sampled_slope(const ScalarFunction& f, double lo, double hi, int pairs, std::uint64_t seed);

// The sampled slope check behind the ScalarFunction invariant:
// every sampled pair satisfies |f(a) - f(b)| <= (lip_bound + 1e-9) |a - b|.
bool passes_slope_check(const ScalarFunction& f, double lo, double hi, int pairs = 10000,
                        std::uint64_t seed = 0);

namespace functions {

ScalarFunction identity();
ScalarFunction absolute_value();
ScalarFunction relu();
ScalarFunction sine();
ScalarFunction constant(double c);
// t^2, Lipschitz only on a bounded interval; the bound is declared for [-radius, radius].
ScalarFunction square(double radius);
// t exp(-t^2 / (2 width^2)): slope 1 at the origin, Lipschitz bound 1, Gaussian decay.
ScalarFunction windowed_ramp(double width);
// Continuous piecewise-linear f with f(0) = 0 and slope +-1 (seeded) on each
// cell [m h, (m + 1) h] for |m| < cells; edge slopes continue outside.
ScalarFunction random_piecewise_linear(int cells, double spacing, std::uint64_t seed);

}  // namespace functions

}  // namespace oplip
