#include "oplip/function.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "oplip/random.hpp"

namespace oplip {

ScalarFunction::ScalarFunction(std::string label, Evaluator evaluator, double lip_bound)
    : label_(std::move(label)),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      lip_bound_(lip_bound) {
  if (!(lip_bound >= 0.0)) throw DomainError("ScalarFunction: Lipschitz bound must be nonnegative");
}

ScalarFunction ScalarFunction::with_breakpoints(std::vector<double> points) const {
  ScalarFunction out = *this;
  std::sort(points.begin(), points.end());
  out.breakpoints_ = std::move(points);
  return out;
}

Complex ScalarFunction::derivative(double t) const {
  if (!derivative_) throw DomainError("ScalarFunction: no derivative attached to " + label_);
  return (*derivative_)(t);
}

ScalarFunction ScalarFunction::with_derivative(Evaluator derivative) const {
  ScalarFunction out = *this;
  out.derivative_ = std::make_shared<const Evaluator>(std::move(derivative));
  return out;
}

ScalarFunction ScalarFunction::with_decay_radius(double radius) const {
  ScalarFunction out = *this;
  out.decay_radius_ = radius;
  return out;
}

ScalarFunction ScalarFunction::scaled(double c) const {
  auto base = evaluator_;
  ScalarFunction out(label_ + "*" + std::to_string(c), [base, c](double t) { return c * (*base)(t); },
                     std::abs(c) * lip_bound_);
  out.breakpoints_ = breakpoints_;
  out.decay_radius_ = decay_radius_;
  if (derivative_) {
    auto d = derivative_;
    out.derivative_ = std::make_shared<const Evaluator>([d, c](double t) { return c * (*d)(t); });
  }
  return out;
}

double sampled_slope(const ScalarFunction& f, double lo, double hi, int pairs, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    if (a == b) continue;
    worst = std::max(worst, std::abs(f(a) - f(b)) / std::abs(a - b));
  }
  return worst;
}

bool passes_slope_check(const ScalarFunction& f, double lo, double hi, int pairs, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  for (int i = 0; i < pairs; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    if (std::abs(f(a) - f(b)) > (f.lip_bound() + 1e-9) * std::abs(a - b)) return false;
  }
  return true;
}

namespace functions {

ScalarFunction identity() {
  return ScalarFunction("identity", [](double t) { return Complex(t); }, 1.0)
      .with_derivative([](double) { return Complex(1.0); });
}

ScalarFunction absolute_value() {
  return ScalarFunction("abs", [](double t) { return Complex(std::abs(t)); }, 1.0)
      .with_breakpoints({0.0});
}

ScalarFunction relu() {
  return ScalarFunction("relu", [](double t) { return Complex(std::max(t, 0.0)); }, 1.0)
      .with_breakpoints({0.0});
}

ScalarFunction sine() {
  return ScalarFunction("sin", [](double t) { return Complex(std::sin(t)); }, 1.0)
      .with_derivative([](double t) { return Complex(std::cos(t)); });
}

ScalarFunction constant(double c) {
  return ScalarFunction("const", [c](double) { return Complex(c); }, 0.0)
      .with_derivative([](double) { return Complex(0.0); });
}

ScalarFunction square(double radius) {
  return ScalarFunction("square", [](double t) { return Complex(t * t); }, 2.0 * radius)
      .with_derivative([](double t) { return Complex(2.0 * t); });
}

ScalarFunction windowed_ramp(double width) {
  const double w2 = width * width;
  return ScalarFunction("windowed_ramp", [w2](double t) { return Complex(t * std::exp(-0.5 * t * t / w2)); },
                        1.0)
      .with_derivative([w2](double t) { return Complex((1.0 - t * t / w2) * std::exp(-0.5 * t * t / w2)); })
      .with_decay_radius(12.0 * width);
}

ScalarFunction random_piecewise_linear(int cells, double spacing, std::uint64_t seed) {
  if (cells < 1 || !(spacing > 0.0)) throw DomainError("random_piecewise_linear: need cells >= 1, spacing > 0");
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5);
  // slopes[m + cells] is the slope on [m h, (m + 1) h], m = -cells .. cells - 1
  std::vector<double> slopes(2 * cells);
  for (auto& s : slopes) s = coin(rng) ? 1.0 : -1.0;
  // knot values at m h, m = -cells .. cells, anchored at f(0) = 0
  std::vector<double> knots(2 * cells + 1, 0.0);
  for (int m = 1; m <= cells; ++m) knots[cells + m] = knots[cells + m - 1] + spacing * slopes[cells + m - 1];
  for (int m = -1; m >= -cells; --m) knots[cells + m] = knots[cells + m + 1] - spacing * slopes[cells + m];
  std::vector<double> breaks;
  for (int m = -cells; m <= cells; ++m) breaks.push_back(m * spacing);
  auto eval = [=](double t) {
    const double x = t / spacing;
    if (x <= -cells) return Complex(knots.front() + (t + cells * spacing) * slopes.front());
    if (x >= cells) return Complex(knots.back() + (t - cells * spacing) * slopes.back());
    const int m = std::clamp(static_cast<int>(std::floor(x)), -cells, cells - 1);
    return Complex(knots[cells + m] + (t - m * spacing) * slopes[cells + m]);
  };
  return ScalarFunction("pwl", eval, 1.0).with_breakpoints(std::move(breaks));
}

}  // namespace functions

}  // namespace oplip
