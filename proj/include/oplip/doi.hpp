#pragma once

#include <optional>

#include "oplip/core.hpp"
#include "oplip/function.hpp"
#include "oplip/multipliers.hpp"
#include "oplip/spectra.hpp"

namespace oplip {

// Spectral grid of spacing 1/m.
class DiscretizationGrid {
 public:
  explicit DiscretizationGrid(int m);
  int density() const { return m_; }
  double spacing() const { return 1.0 / m_; }

 private:
  int m_;
};

// T_{phi_f}(x) against the spectral families of A (left) and B (right): the
// two-family Schur multiplier with the divided-difference kernel.
Matrix doi_apply(const ScalarFunction& f, const HermitianOperator& a, const HermitianOperator& b, const Matrix& x);
Matrix doi_apply(const ScalarFunction& f, const ProjectionFamily& left, const ProjectionFamily& right,
                 const Matrix& x);

// Smallest |lambda - mu| over eigenvalues lambda of A and mu of B.
double min_cross_spectral_gap(const SpectralDecomposition& a, const SpectralDecomposition& b);

// ||f(A) - f(B) - T_{phi_f}(A - B)||_F. f(A) and f(B) come from the spectral
// calculus, the right side from the Schur multiplier.
double perturbation_identity_residual(const ScalarFunction& f, const HermitianOperator& a,
                                      const HermitianOperator& b);

// Relative contract for the residual above: 1e-9, or 1e-6 when the cross
// spectral gap is below 1e-6.
double perturbation_identity_tolerance(const HermitianOperator& a, const HermitianOperator& b);

// ||f(A) - f(B)||_alpha / ||A - B||_alpha. Throws DomainError when A == B.
double lipschitz_ratio(const ScalarFunction& f, const HermitianOperator& a, const HermitianOperator& b,
                       SchattenIndex alpha);

// Same eigenbasis, eigenvalues floored to the 1/m grid, so ||A - A_m|| <= 1/m.
HermitianOperator discretize(const HermitianOperator& a, DiscretizationGrid grid);

// e^{irA} - e^{irB} by the spectral calculus.
Matrix exponential_difference(const HermitianOperator& a, const HermitianOperator& b, double r);

// ir * integral over [0, 1] of e^{ir(1-t)A} (A - B) e^{irtB} dt with a
// `steps`-node Gauss-Legendre rule.
Matrix duhamel_difference(const HermitianOperator& a, const HermitianOperator& b, double r, int steps);

// x with every block e_k x f_j removed whose labels coincide (|lambda_k - mu_j| <= 1e-12).
Matrix off_coincidence_part(const Matrix& x, const ProjectionFamily& left, const ProjectionFamily& right);

struct TensorRepOptions {
  double s_half_width = 8.0;
  double s_spacing = 0.05;
  int t_steps = 64;
  // When set, grids are doubled until successive results agree to
  // tolerance * max(1, ||result||_F), at most max_refinements times.
  std::optional<double> tolerance;
  int max_refinements = 3;
};

// integral of h_n(s) ds integral_0^1 e^{is(1-t)A} x e^{istB} dt, where h_n is
// the Fourier transform of f_n' (f_n = G_n * f), so that
// f_n'(t) = integral of h_n(s) e^{ist} ds. The s-integral is a trapezoid
// rule on [-half_width, half_width], the t-integral Gauss-Legendre. f must
// declare a decay radius. x is first restricted to its off-coincidence part.
Matrix tensor_rep_apply(const ScalarFunction& f, int n, const HermitianOperator& a, const HermitianOperator& b,
                        const Matrix& x, const TensorRepOptions& options = {});

// h_n(s) = i s exp(-s^2 / (2 n^2)) fhat(s), fhat(s) = (1 / 2 pi) integral of f(t) e^{-ist} dt.
Complex mollified_derivative_transform(const ScalarFunction& f, int n, double s);

// integral_0^1 f_n'((1 - t) lambda + t mu) dt. Equals f_n'(lambda) at lambda == mu.
Complex phi_n_kernel(const ScalarFunction& f, int n, double lambda, double mu);

}  // namespace oplip
