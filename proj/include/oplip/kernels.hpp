#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oplip/core.hpp"
#include "oplip/function.hpp"

namespace oplip {

inline constexpr double kCoincidenceTolerance = 1e-12;

// (f(lambda) - f(mu)) / (lambda - mu), and 0 when |lambda - mu| <= tolerance.
Complex divided_difference(const ScalarFunction& f, double lambda, double mu,
                           double tolerance = kCoincidenceTolerance);

// ---------------------------------------------------------------------------
// Smooth cutoff and its Fourier weight

// C-infinity h with h(t) = e^t for t <= log 2, h(t) = 0 for t >= 1 + log 2 and
// h >= 0. On the bridge the factor e^t is multiplied by 1 - S(t - log 2), where
// S(u) = p(u) / (p(u) + p(1 - u)) and p(u) = exp(-sharpness / u) for u > 0.
ScalarFunction build_cutoff(double bridge_sharpness = 2.0);

struct FourierGrid {
  double spacing = 0.01;
  double half_width = 200.0;

  std::size_t size() const;
  double node(std::size_t i) const;
};

// Samples of g on a uniform grid, with the convention
// h(t) = integral of g(s) e^{i t s} ds. Integrals against g use the
// trapezoid rule on the grid.
class FourierWeight {
 public:
  FourierWeight(FourierGrid grid, std::vector<Complex> samples);

  static FourierWeight zero(FourierGrid grid);

  const FourierGrid& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }
  double node(std::size_t i) const { return grid_.node(i); }
  double weight(std::size_t i) const;
  const std::vector<Complex>& samples() const { return samples_; }

  // integral of g(s) e^{i t s} ds
  Complex inverse_transform(double t) const;
  // integral of g(s) ds
  Complex total() const { return inverse_transform(0.0); }

  // CSV with header "s,re_g,im_g".
  std::string to_csv() const;

 private:
  FourierGrid grid_;
  std::vector<Complex> samples_;
};

// g(s) = (1 / 2 pi) integral of h(t) e^{-i s t} dt for a cutoff built by
// build_cutoff. The part t <= 0, where h(t) = e^t, is integrated in closed
// form; [0, 1 + log 2] uses composite Gauss-Legendre. Throws QuadratureError
// with a suggested refinement when the grid's estimated truncation or
// aliasing error exceeds `tolerance`.
FourierWeight fourier_weight(const ScalarFunction& cutoff, FourierGrid grid = {}, double tolerance = 1e-6);

struct RatioReconstruction {
  Complex value;
  double relative_error;  // |value - lambda/mu| / (lambda/mu)
};

// integral of g(s) lambda^{is} mu^{-is} ds, defined for lambda, mu > 0 with lambda / mu <= 2.
RatioReconstruction reconstruct_ratio(const FourierWeight& g, double lambda, double mu);

// integral of |s|^n |g(s)| ds for 0 <= n <= 6.
double moment(const FourierWeight& g, int n);

// ---------------------------------------------------------------------------
// Gaussian mollifiers

// G_n(t) = n G(n t) with G the standard normal density.
class Mollifier {
 public:
  explicit Mollifier(int n);

  int scale() const { return n_; }
  double sigma() const { return 1.0 / n_; }
  double density(double t) const;
  double density_derivative(double t) const;
  // Quadrature of the density over the truncated support [-10 sigma, 10 sigma].
  double mass() const;

 private:
  int n_;
};

// G_n * f by composite Gauss-Legendre over [-10/n, 10/n], split at f's
// breakpoints. The result carries the same Lipschitz bound and a derivative
// (G_n' * f).
ScalarFunction mollify(const ScalarFunction& f, int n);

// ---------------------------------------------------------------------------
// Integer-indexed sequences and profiles

class IntegerSequence {
 public:
  using Lookup = std::function<std::optional<Complex>(std::int64_t)>;

  explicit IntegerSequence(Lookup lookup);
  static IntegerSequence from_map(std::map<std::int64_t, Complex> values);
  static IntegerSequence total(std::function<Complex(std::int64_t)> values);

  std::optional<Complex> find(std::int64_t n) const { return lookup_(n); }
  // Throws DomainError for an index outside the sequence's domain.
  Complex at(std::int64_t n) const;

 private:
  Lookup lookup_;
};

// n -> |n|^{is} for n != 0 and 0 at n = 0.
IntegerSequence power_sequence(double s);

// Largest total variation of seq over the dyadic block 2^k <= |n| <= 2^{k+1},
// taken separately over the positive and the negative half.
double dyadic_variation(const IntegerSequence& seq, int k);

// Nondecreasing integer-valued f on the window [-K, K] with f(0) = 0 and
// 0 <= f(k) - f(j) <= 2 (k - j) for j <= k.
class IntegerProfile {
 public:
  // values[i] = f(i - K)
  IntegerProfile(int window, std::vector<std::int64_t> values);

  // increments[i] = f(m) - f(m - 1) for m = -K + 1 + i, so increments.size() == 2K.
  static IntegerProfile from_increments(int window, std::span<const int> increments);
  static IntegerProfile identity(int window);

  int window() const { return window_; }
  bool contains(std::int64_t k) const { return k >= -window_ && k <= window_; }
  std::int64_t operator()(std::int64_t k) const;
  const std::vector<std::int64_t>& values() const { return values_; }

  bool nondecreasing() const { return true; }
  bool strictly_increasing() const;
  std::int64_t max_increment() const;

 private:
  int window_;
  std::vector<std::int64_t> values_;
};

enum class ProfileIncrements {
  zero_or_two,  // a_m + 1 with a_m = +-1
  one_or_two,   // strictly increasing profiles
};

IntegerProfile random_integer_profile(int window, std::uint64_t seed,
                                      ProfileIncrements increments = ProfileIncrements::zero_or_two);

// Piecewise-linear interpolation of the profile; edge increments continue
// linearly outside the window. Lipschitz bound = largest increment.
ScalarFunction profile_function(const IntegerProfile& profile);

}  // namespace oplip
