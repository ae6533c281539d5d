#pragma once

#include <limits>
#include <string>

#include "oplip/core.hpp"
#include "oplip/random.hpp"

namespace oplip {

class ScalarFunction;

// Dense complex self-adjoint matrix. Construction checks
// ||H - H*||_F <= 1e-12 max(1, ||H||_F) and stores the exactly Hermitian part.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& entries);

  static HermitianOperator diagonal(const RealVector& values);
  static HermitianOperator random(Index dim, Rng& rng, double scale = 1.0);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  friend bool operator==(const HermitianOperator& a, const HermitianOperator& b) {
    return a.entries_ == b.entries_;
  }

 private:
  Matrix entries_;
};

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);

// Eigenvalues ascending; columns of `basis` are the matching orthonormal eigenvectors.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix basis;

  Index dim() const { return eigenvalues.size(); }
  Matrix reconstruct() const;
};

// Schatten index alpha in [1, inf]. Infinity is a distinct value meaning the
// operator norm, never approximated by a large finite alpha.
class SchattenIndex {
 public:
  explicit SchattenIndex(double value);

  static SchattenIndex infinity() { return SchattenIndex(std::numeric_limits<double>::infinity()); }
  // Accepts decimals, fractions ("4/3") and "inf"/"infinity".
  static SchattenIndex parse(const std::string& text);

  bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
  double value() const { return value_; }
  // Reciprocal 1/alpha, 0 for infinity.
  double reciprocal() const { return is_infinite() ? 0.0 : 1.0 / value_; }
  std::string to_string() const;

  friend bool operator==(SchattenIndex a, SchattenIndex b) { return a.value_ == b.value_; }
  friend auto operator<=>(SchattenIndex a, SchattenIndex b) { return a.value_ <=> b.value_; }

 private:
  double value_;
};

SpectralDecomposition eig_hermitian(const HermitianOperator& h);

// basis * diag(f(eigenvalues)) * basis*. f must be finite and real on the spectrum.
HermitianOperator apply_function(const ScalarFunction& f, const SpectralDecomposition& d);

// Singular values, descending.
RealVector singular_values(const Matrix& x);

double schatten_norm(const Matrix& x, SchattenIndex alpha);

SchattenIndex dual_index(SchattenIndex alpha);

// tau(y x), the trace of the product.
Complex trace_pairing(const Matrix& y, const Matrix& x);

}  // namespace oplip
