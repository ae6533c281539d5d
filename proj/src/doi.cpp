#include "oplip/doi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oplip/kernels.hpp"
#include "oplip/parallel.hpp"
#include "oplip/quadrature.hpp"

namespace oplip {

DiscretizationGrid::DiscretizationGrid(int m) : m_(m) {
  if (m < 1) throw DomainError("DiscretizationGrid: m must be >= 1");
}

Matrix doi_apply(const ScalarFunction& f, const ProjectionFamily& left, const ProjectionFamily& right,
                 const Matrix& x) {
  return schur_multiply(divided_difference_kernel(f, left, right), x, left, right);
}

Matrix doi_apply(const ScalarFunction& f, const HermitianOperator& a, const HermitianOperator& b, const Matrix& x) {
  const auto left = ProjectionFamily::from_decomposition(eig_hermitian(a));
  const auto right = ProjectionFamily::from_decomposition(eig_hermitian(b));
  return doi_apply(f, left, right, x);
}

double min_cross_spectral_gap(const SpectralDecomposition& a, const SpectralDecomposition& b) {
  // both spectra are sorted: merge walk
  double gap = std::numeric_limits<double>::infinity();
  Index j = 0;
  for (Index i = 0; i < a.dim(); ++i) {
    while (j + 1 < b.dim() && b.eigenvalues(j + 1) <= a.eigenvalues(i)) ++j;
    for (Index k = std::max<Index>(0, j - 1); k < std::min<Index>(b.dim(), j + 2); ++k)
      gap = std::min(gap, std::abs(a.eigenvalues(i) - b.eigenvalues(k)));
  }
  return gap;
}

double perturbation_identity_residual(const ScalarFunction& f, const HermitianOperator& a,
                                      const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("perturbation_identity_residual: dimension mismatch");
  const auto da = eig_hermitian(a);
  const auto db = eig_hermitian(b);
  const Matrix lhs = apply_function(f, da).matrix() - apply_function(f, db).matrix();
  const auto left = ProjectionFamily::from_decomposition(da);
  const auto right = ProjectionFamily::from_decomposition(db);
  const Matrix rhs = doi_apply(f, left, right, a.matrix() - b.matrix());
  return (lhs - rhs).norm();
}

double perturbation_identity_tolerance(const HermitianOperator& a, const HermitianOperator& b) {
  const double gap = min_cross_spectral_gap(eig_hermitian(a), eig_hermitian(b));
  return gap < 1e-6 ? 1e-6 : 1e-9;
}

double lipschitz_ratio(const ScalarFunction& f, const HermitianOperator& a, const HermitianOperator& b,
                       SchattenIndex alpha) {
  if (a.dim() != b.dim()) throw DimensionError("lipschitz_ratio: dimension mismatch");
  if (a == b) throw DomainError("lipschitz_ratio: undefined for A == B");
  const double denom = schatten_norm(a.matrix() - b.matrix(), alpha);
  if (denom == 0.0) throw DomainError("lipschitz_ratio: undefined for A == B");
  const Matrix diff = apply_function(f, eig_hermitian(a)).matrix() - apply_function(f, eig_hermitian(b)).matrix();
  return schatten_norm(diff, alpha) / denom;
}

HermitianOperator discretize(const HermitianOperator& a, DiscretizationGrid grid) {
  const auto d = eig_hermitian(a);
  const double m = grid.density();
  RealVector floored(d.dim());
  for (Index i = 0; i < d.dim(); ++i) {
    const double scaled = d.eigenvalues(i) * m;
    const double nearest = std::round(scaled);
    // eigenvalues already on the grid (up to solver rounding) stay put
    floored(i) = (std::abs(scaled - nearest) <= 1e-9 * std::max(1.0, std::abs(scaled)) ? nearest
                                                                                          : std::floor(scaled)) /
                 m;
  }
  return HermitianOperator(d.basis * floored.cast<Complex>().asDiagonal() * d.basis.adjoint());
}

Matrix exponential_difference(const HermitianOperator& a, const HermitianOperator& b, double r) {
  if (a.dim() != b.dim()) throw DimensionError("exponential_difference: dimension mismatch");
  auto expo = [r](const SpectralDecomposition& d) {
    Eigen::VectorXcd phases(d.dim());
    for (Index i = 0; i < d.dim(); ++i) phases(i) = std::polar(1.0, r * d.eigenvalues(i));
    return Matrix(d.basis * phases.asDiagonal() * d.basis.adjoint());
  };
  return expo(eig_hermitian(a)) - expo(eig_hermitian(b));
}

Matrix duhamel_difference(const HermitianOperator& a, const HermitianOperator& b, double r, int steps) {
  if (a.dim() != b.dim()) throw DimensionError("duhamel_difference: dimension mismatch");
  if (steps < 1) throw DomainError("duhamel_difference: steps must be positive");
  const auto da = eig_hermitian(a);
  const auto db = eig_hermitian(b);
  const Matrix middle = da.basis.adjoint() * (a.matrix() - b.matrix()) * db.basis;
  const QuadratureRule rule = gauss_legendre(steps, 0.0, 1.0);
  const Index n = a.dim();
  Matrix acc = Matrix::Zero(n, n);
  Eigen::VectorXcd left(n), right(n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double t = rule.nodes[q];
    for (Index i = 0; i < n; ++i) left(i) = std::polar(1.0, r * (1.0 - t) * da.eigenvalues(i));
    for (Index i = 0; i < n; ++i) right(i) = std::polar(1.0, r * t * db.eigenvalues(i));
    acc += rule.weights[q] * (left.asDiagonal() * middle * right.asDiagonal());
  }
  return Complex(0.0, r) * (da.basis * acc * db.basis.adjoint());
}

Matrix off_coincidence_part(const Matrix& x, const ProjectionFamily& left, const ProjectionFamily& right) {
  const auto& lk = left.labels();
  const auto& rj = right.labels();
  const auto mask = KernelMatrix::from(left.group_count(), right.group_count(), [&](int k, int j) {
    return Complex(std::abs(lk[k] - rj[j]) <= kCoincidenceTolerance ? 0.0 : 1.0);
  });
  return schur_multiply(mask, x, left, right);
}

Complex mollified_derivative_transform(const ScalarFunction& f, int n, double s) {
  const auto radius = f.decay_radius();
  if (!radius) throw DomainError("mollified_derivative_transform: " + f.label() + " declares no decay radius");
  const double panel = std::min(0.5, 4.0 / std::max(1.0, std::abs(s)));
  const QuadratureRule rule = piecewise_gauss_legendre(16, panel, -*radius, *radius, f.breakpoints());
  Complex fhat(0.0);
  for (std::size_t i = 0; i < rule.size(); ++i) fhat += rule.weights[i] * f(rule.nodes[i]) * std::polar(1.0, -s * rule.nodes[i]);
  fhat /= 2.0 * kPi;
  return Complex(0.0, s) * std::exp(-0.5 * s * s / (static_cast<double>(n) * n)) * fhat;
}

namespace {

Matrix tensor_rep_kernel(const std::vector<double>& lambda, const std::vector<double>& mu,
                         const std::vector<Complex>& h, double half_width, double spacing, int t_steps) {
  const std::size_t count = h.size();
  const QuadratureRule trule = gauss_legendre(t_steps, 0.0, 1.0);
  const Index rows = static_cast<Index>(lambda.size());
  const Index cols = static_cast<Index>(mu.size());
  // fixed chunking keeps the reduction order independent of the worker count
  constexpr std::size_t kChunk = 32;
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<Matrix> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    Matrix acc = Matrix::Zero(rows, cols);
    Matrix left(rows, t_steps), right(t_steps, cols);
    for (std::size_t i = c * kChunk; i < std::min(count, (c + 1) * kChunk); ++i) {
      const double s = -half_width + static_cast<double>(i) * spacing;
      const double w = (i == 0 || i + 1 == count) ? 0.5 * spacing : spacing;
      for (int q = 0; q < t_steps; ++q) {
        const double t = trule.nodes[q];
        for (Index a = 0; a < rows; ++a) left(a, q) = trule.weights[q] * std::polar(1.0, s * (1.0 - t) * lambda[a]);
        for (Index b = 0; b < cols; ++b) right(q, b) = std::polar(1.0, s * t * mu[b]);
      }
      acc.noalias() += (w * h[i]) * (left * right);
    }
    partial[c] = std::move(acc);
  });
  Matrix total = Matrix::Zero(rows, cols);
  for (const auto& p : partial) total += p;
  return total;
}

Matrix tensor_rep_once(const ScalarFunction& f, int n, const ProjectionFamily& left,
                       const ProjectionFamily& right, const Matrix& local_x, double half_width, double spacing,
                       int t_steps) {
  const FourierGrid grid{spacing, half_width};
  const std::size_t count = grid.size();
  std::vector<Complex> h(count);
  parallel_for(count, [&](std::size_t i) { h[i] = mollified_derivative_transform(f, n, grid.node(i)); });
  std::vector<double> lambda(left.eigenvalues().data(), left.eigenvalues().data() + left.dim());
  std::vector<double> mu(right.eigenvalues().data(), right.eigenvalues().data() + right.dim());
  const Matrix kernel = tensor_rep_kernel(lambda, mu, h, half_width, spacing, t_steps);
  Matrix out = local_x.cwiseProduct(kernel);
  out = left.basis() * out * right.basis().adjoint();
  return out;
}

}  // namespace

Matrix tensor_rep_apply(const ScalarFunction& f, int n, const HermitianOperator& a, const HermitianOperator& b,
                        const Matrix& x, const TensorRepOptions& options) {
  if (n < 1) throw DomainError("tensor_rep_apply: mollifier scale must be positive");
  if (!f.decay_radius()) throw DomainError("tensor_rep_apply: " + f.label() + " declares no decay radius");
  if (options.t_steps < 1 || !(options.s_spacing > 0.0) || !(options.s_half_width > 0.0))
    throw DomainError("tensor_rep_apply: invalid quadrature grid");
  const auto left = ProjectionFamily::from_decomposition(eig_hermitian(a));
  const auto right = ProjectionFamily::from_decomposition(eig_hermitian(b));
  if (x.rows() != a.dim() || x.cols() != b.dim()) throw DimensionError("tensor_rep_apply: dimension mismatch");
  const Matrix local_x = left.basis().adjoint() * off_coincidence_part(x, left, right) * right.basis();

  double half_width = options.s_half_width;
  double spacing = options.s_spacing;
  int t_steps = options.t_steps;
  Matrix result = tensor_rep_once(f, n, left, right, local_x, half_width, spacing, t_steps);
  if (!options.tolerance) return result;

  double residual = std::numeric_limits<double>::infinity();
  for (int level = 0; level < options.max_refinements; ++level) {
    half_width *= 2.0;
    spacing *= 0.5;
    t_steps *= 2;
    Matrix refined = tensor_rep_once(f, n, left, right, local_x, half_width, spacing, t_steps);
    residual = (refined - result).norm() / std::max(1.0, refined.norm());
    result = std::move(refined);
    if (residual <= *options.tolerance) return result;
  }
  std::ostringstream msg;
  msg << "tensor_rep_apply: quadrature budget exhausted after " << options.max_refinements
      << " refinements; achieved residual " << residual << " against tolerance " << *options.tolerance;
  throw QuadratureError(msg.str());
}

Complex phi_n_kernel(const ScalarFunction& f, int n, double lambda, double mu) {
  const ScalarFunction fn = mollify(f, n);
  if (lambda == mu) return fn.derivative(lambda);
  const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * std::abs(lambda - mu) * n)));
  const QuadratureRule rule = composite_gauss_legendre(16, panels, 0.0, 1.0);
  Complex acc(0.0);
  for (std::size_t i = 0; i < rule.size(); ++i)
    acc += rule.weights[i] * fn.derivative((1.0 - rule.nodes[i]) * lambda + rule.nodes[i] * mu);
  return acc;
}

}  // namespace oplip
