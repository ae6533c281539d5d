#include "oplip/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <locale>
#include <sstream>

#include "oplip/parallel.hpp"
#include "oplip/quadrature.hpp"
#include "oplip/random.hpp"

namespace oplip {

namespace {
const double kLog2 = std::log(2.0);
}

Complex divided_difference(const ScalarFunction& f, double lambda, double mu, double tolerance) {
  if (std::abs(lambda - mu) <= tolerance) return Complex(0.0);
  return (f(lambda) - f(mu)) / (lambda - mu);
}

// ---------------------------------------------------------------------------

ScalarFunction build_cutoff(double bridge_sharpness) {
  if (!(bridge_sharpness > 0.0)) throw DomainError("build_cutoff: sharpness must be positive");
  const double sigma = bridge_sharpness;
  auto bump = [sigma](double u) { return u > 0.0 ? std::exp(-sigma / u) : 0.0; };
  auto eval = [bump](double t) {
    if (t <= kLog2) return Complex(std::exp(t));
    if (t >= 1.0 + kLog2) return Complex(0.0);
    const double u = t - kLog2;
    const double a = bump(u);
    const double b = bump(1.0 - u);
    return Complex(std::exp(t) * b / (a + b));
  };
  // Lipschitz bound from a dense difference-quotient scan of the bridge, padded by 1%.
  double slope = 2.0;
  const int samples = 20000;
  for (int i = 0; i < samples; ++i) {
    const double a = kLog2 + static_cast<double>(i) / samples;
    const double b = kLog2 + static_cast<double>(i + 1) / samples;
    slope = std::max(slope, std::abs(eval(b) - eval(a)) * samples);
  }
  return ScalarFunction("cutoff", eval, 1.01 * slope).with_decay_radius(1.0 + kLog2);
}

std::size_t FourierGrid::size() const {
  return static_cast<std::size_t>(std::floor(2.0 * half_width / spacing + 0.5)) + 1;
}

double FourierGrid::node(std::size_t i) const { return -half_width + static_cast<double>(i) * spacing; }

FourierWeight::FourierWeight(FourierGrid grid, std::vector<Complex> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (!(grid_.spacing > 0.0) || !(grid_.half_width > 0.0))
    throw DomainError("FourierWeight: grid spacing and half-width must be positive");
  if (samples_.size() != grid_.size()) throw DimensionError("FourierWeight: sample count does not match grid");
}

FourierWeight FourierWeight::zero(FourierGrid grid) {
  return FourierWeight(grid, std::vector<Complex>(grid.size(), Complex(0.0)));
}

double FourierWeight::weight(std::size_t i) const {
  return (i == 0 || i + 1 == samples_.size()) ? 0.5 * grid_.spacing : grid_.spacing;
}

Complex FourierWeight::inverse_transform(double t) const {
  Complex acc(0.0);
  for (std::size_t i = 0; i < samples_.size(); ++i)
    acc += weight(i) * samples_[i] * std::polar(1.0, node(i) * t);
  return acc;
}

std::string FourierWeight::to_csv() const {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  out << "s,re_g,im_g\n";
  for (std::size_t i = 0; i < samples_.size(); ++i)
    out << node(i) << ',' << samples_[i].real() << ',' << samples_[i].imag() << '\n';
  return out.str();
}

FourierWeight fourier_weight(const ScalarFunction& cutoff, FourierGrid grid, double tolerance) {
  const double top = 1.0 + kLog2;
  for (double t : {-6.0, -1.0, 0.0, 0.5, kLog2}) {
    if (std::abs(cutoff(t) - std::exp(t)) > 1e-13 * std::exp(t))
      throw DomainError("fourier_weight: cutoff does not equal e^t left of log 2");
  }
  for (double t : {top, top + 0.5, 5.0}) {
    if (std::abs(cutoff(t)) != 0.0) throw DomainError("fourier_weight: cutoff does not vanish right of 1 + log 2");
  }

  // Periodic images of h under the trapezoid rule sit 2 pi / spacing apart.
  // The image on the right must clear the support for t >= log(0.05), and the
  // one on the left contributes about 2 exp(-2 pi / spacing) against ratios >= 0.05.
  const double period = 2.0 * kPi / grid.spacing;
  const double alias = 2.0 * std::exp(-period) / 0.05;
  if (period < top - std::log(0.05) || alias > tolerance) {
    const double suggested = 2.0 * kPi / std::max(top - std::log(0.05) + 1.0, std::log(40.0 / tolerance));
    std::ostringstream msg;
    msg << "fourier_weight: spacing " << grid.spacing << " too coarse (aliasing estimate " << alias
        << "); use spacing <= " << suggested;
    throw QuadratureError(msg.str());
  }

  const int panels = std::max(64, static_cast<int>(std::ceil(grid.half_width * top / 4.0)));
  const QuadratureRule rule = composite_gauss_legendre(20, panels, 0.0, top);
  std::vector<double> weighted(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) weighted[k] = rule.weights[k] * cutoff(rule.nodes[k]).real();

  const std::size_t count = grid.size();
  std::vector<Complex> samples(count);
  parallel_for(count, [&](std::size_t i) {
    const double s = grid.node(i);
    // integral over t <= 0 of e^{t (1 - i s)}
    Complex acc = 1.0 / Complex(1.0, -s);
    for (std::size_t k = 0; k < rule.size(); ++k) acc += weighted[k] * std::polar(1.0, -s * rule.nodes[k]);
    samples[i] = acc / (2.0 * kPi);
  });

  FourierWeight g(grid, std::move(samples));
  const double edge = std::max(std::abs(g.samples().front()), std::abs(g.samples().back()));
  const double truncation = edge * grid.half_width;
  if (truncation > tolerance) {
    std::ostringstream msg;
    msg << "fourier_weight: half-width " << grid.half_width << " too small (truncation estimate " << truncation
        << "); try half_width >= " << 2.0 * grid.half_width;
    throw QuadratureError(msg.str());
  }
  return g;
}

RatioReconstruction reconstruct_ratio(const FourierWeight& g, double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw DomainError("reconstruct_ratio: lambda and mu must be positive");
  const double ratio = lambda / mu;
  if (ratio > 2.0 * (1.0 + 1e-14)) throw DomainError("reconstruct_ratio: lambda / mu exceeds 2");
  const Complex value = g.inverse_transform(std::log(lambda) - std::log(mu));
  return {value, std::abs(value - ratio) / ratio};
}

double moment(const FourierWeight& g, int n) {
  if (n < 0 || n > 6) throw DomainError("moment: order must lie in 0..6");
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    acc += g.weight(i) * std::pow(std::abs(g.node(i)), n) * std::abs(g.samples()[i]);
  return acc;
}

// ---------------------------------------------------------------------------

Mollifier::Mollifier(int n) : n_(n) {
  if (n < 1) throw DomainError("Mollifier: scale must be a positive integer");
}

double Mollifier::density(double t) const {
  const double x = n_ * t;
  return n_ * std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double Mollifier::density_derivative(double t) const {
  return -static_cast<double>(n_) * n_ * t * density(t);
}

double Mollifier::mass() const {
  const QuadratureRule rule = composite_gauss_legendre(16, 40, -10.0 * sigma(), 10.0 * sigma());
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * density(rule.nodes[i]);
  return acc;
}

ScalarFunction mollify(const ScalarFunction& f, int n) {
  const Mollifier g(n);
  const double half = 10.0 * g.sigma();
  const double panel = 0.5 * g.sigma();
  const std::vector<double> breaks = f.breakpoints();
  const QuadratureRule smooth_rule = composite_gauss_legendre(16, 40, -half, half);

  // integral over u in [-half, half] of kernel(u) f(t - u), split where t - u hits a breakpoint
  auto convolve = [f, g, half, panel, breaks, smooth_rule](double t, bool derivative) {
    std::vector<double> cuts;
    auto lo = std::lower_bound(breaks.begin(), breaks.end(), t - half);
    auto hi = std::upper_bound(breaks.begin(), breaks.end(), t + half);
    for (auto it = lo; it != hi; ++it) cuts.push_back(t - *it);
    const QuadratureRule rule = cuts.empty() ? smooth_rule : piecewise_gauss_legendre(16, panel, -half, half, cuts);
    Complex acc(0.0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double u = rule.nodes[i];
      const double k = derivative ? g.density_derivative(u) : g.density(u);
      acc += rule.weights[i] * k * f(t - u);
    }
    return acc;
  };

  ScalarFunction out(f.label() + "_moll" + std::to_string(n), [convolve](double t) { return convolve(t, false); },
                     f.lip_bound());
  out = out.with_derivative([convolve](double t) { return convolve(t, true); });
  if (f.decay_radius()) out = out.with_decay_radius(*f.decay_radius() + half);
  return out;
}

// ---------------------------------------------------------------------------

IntegerSequence::IntegerSequence(Lookup lookup) : lookup_(std::move(lookup)) {}

IntegerSequence IntegerSequence::from_map(std::map<std::int64_t, Complex> values) {
  return IntegerSequence([values = std::move(values)](std::int64_t n) -> std::optional<Complex> {
    auto it = values.find(n);
    if (it == values.end()) return std::nullopt;
    return it->second;
  });
}

IntegerSequence IntegerSequence::total(std::function<Complex(std::int64_t)> values) {
  return IntegerSequence([values = std::move(values)](std::int64_t n) -> std::optional<Complex> { return values(n); });
}

Complex IntegerSequence::at(std::int64_t n) const {
  auto v = lookup_(n);
  if (!v) throw DomainError("IntegerSequence: index " + std::to_string(n) + " outside the domain");
  return *v;
}

IntegerSequence power_sequence(double s) {
  return IntegerSequence::total([s](std::int64_t n) {
    if (n == 0) return Complex(0.0);
    return std::polar(1.0, s * std::log(std::abs(static_cast<double>(n))));
  });
}

double dyadic_variation(const IntegerSequence& seq, int k) {
  if (k < 0 || k > 60) throw DomainError("dyadic_variation: block index must lie in 0..60");
  const std::int64_t lo = std::int64_t{1} << k;
  const std::int64_t hi = lo << 1;
  double positive = 0.0;
  for (std::int64_t n = lo; n < hi; ++n) positive += std::abs(seq.at(n + 1) - seq.at(n));
  double negative = 0.0;
  for (std::int64_t n = -hi; n < -lo; ++n) negative += std::abs(seq.at(n + 1) - seq.at(n));
  return std::max(positive, negative);
}

IntegerProfile::IntegerProfile(int window, std::vector<std::int64_t> values)
    : window_(window), values_(std::move(values)) {
  if (window < 0) throw DomainError("IntegerProfile: window must be nonnegative");
  if (values_.size() != static_cast<std::size_t>(2 * window + 1))
    throw DimensionError("IntegerProfile: expected 2K + 1 values");
  if (values_[window] != 0) throw DomainError("IntegerProfile: f(0) must be 0");
  for (std::size_t i = 1; i < values_.size(); ++i) {
    const std::int64_t inc = values_[i] - values_[i - 1];
    if (inc < 0 || inc > 2) throw DomainError("IntegerProfile: increments must lie in [0, 2]");
  }
}

IntegerProfile IntegerProfile::from_increments(int window, std::span<const int> increments) {
  if (increments.size() != static_cast<std::size_t>(2 * window))
    throw DimensionError("IntegerProfile: expected 2K increments");
  std::vector<std::int64_t> values(2 * window + 1, 0);
  for (int m = 1; m <= window; ++m) values[window + m] = values[window + m - 1] + increments[window + m - 1];
  for (int m = -1; m >= -window; --m) values[window + m] = values[window + m + 1] - increments[window + m];
  return IntegerProfile(window, std::move(values));
}

IntegerProfile IntegerProfile::identity(int window) {
  std::vector<int> ones(2 * window, 1);
  return from_increments(window, ones);
}

std::int64_t IntegerProfile::operator()(std::int64_t k) const {
  if (!contains(k)) throw DomainError("IntegerProfile: index " + std::to_string(k) + " outside the window");
  return values_[static_cast<std::size_t>(k + window_)];
}

bool IntegerProfile::strictly_increasing() const {
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (values_[i] == values_[i - 1]) return false;
  return true;
}

std::int64_t IntegerProfile::max_increment() const {
  std::int64_t best = 0;
  for (std::size_t i = 1; i < values_.size(); ++i) best = std::max(best, values_[i] - values_[i - 1]);
  return best;
}

IntegerProfile random_integer_profile(int window, std::uint64_t seed, ProfileIncrements increments) {
  if (window < 1) throw DomainError("random_integer_profile: window must be >= 1");
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<int> inc(2 * window);
  for (auto& a : inc) {
    const bool up = coin(rng);
    a = increments == ProfileIncrements::zero_or_two ? (up ? 2 : 0) : (up ? 2 : 1);
  }
  return IntegerProfile::from_increments(window, inc);
}

ScalarFunction profile_function(const IntegerProfile& profile) {
  const int window = profile.window();
  const std::vector<std::int64_t> values = profile.values();
  const double left_slope = window > 0 ? static_cast<double>(values[1] - values[0]) : 0.0;
  const double right_slope = window > 0 ? static_cast<double>(values[2 * window] - values[2 * window - 1]) : 0.0;
  auto eval = [=](double t) {
    if (t <= -window) return Complex(values.front() + (t + window) * left_slope);
    if (t >= window) return Complex(values.back() + (t - window) * right_slope);
    const int m = std::clamp(static_cast<int>(std::floor(t)), -window, window - 1);
    const double a = static_cast<double>(values[m + window]);
    const double b = static_cast<double>(values[m + window + 1]);
    return Complex(a + (t - m) * (b - a));
  };
  std::vector<double> breaks;
  for (int k = -window; k <= window; ++k) breaks.push_back(k);
  return ScalarFunction("profile", eval, static_cast<double>(profile.max_increment()))
      .with_breakpoints(std::move(breaks));
}

}  // namespace oplip
