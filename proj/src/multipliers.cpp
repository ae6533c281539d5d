#include "oplip/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oplip/parallel.hpp"
#include "oplip/random.hpp"

namespace oplip {

namespace {

// left* x right, skipping rotations by the standard basis
Matrix to_local(const Matrix& x, const ProjectionFamily& left, const ProjectionFamily& right) {
  Matrix out = left.identity_basis() ? x : Matrix(left.basis().adjoint() * x);
  if (!right.identity_basis()) out = out * right.basis();
  return out;
}

Matrix from_local(const Matrix& x, const ProjectionFamily& left, const ProjectionFamily& right) {
  Matrix out = left.identity_basis() ? x : Matrix(left.basis() * x);
  if (!right.identity_basis()) out = out * right.basis().adjoint();
  return out;
}

void check_conformable(const Matrix& x, const ProjectionFamily& left, const ProjectionFamily& right,
                       const char* what) {
  if (x.rows() != left.dim() || x.cols() != right.dim()) {
    std::ostringstream msg;
    msg << what << ": matrix is " << x.rows() << "x" << x.cols() << " but families have dims " << left.dim()
        << " and " << right.dim();
    throw DimensionError(msg.str());
  }
}

}  // namespace

ProjectionFamily::ProjectionFamily(Matrix basis, RealVector eigenvalues, double tolerance, bool identity_basis)
    : basis_(std::move(basis)), eigenvalues_(std::move(eigenvalues)), identity_basis_(identity_basis) {
  const Index n = eigenvalues_.size();
  group_of_.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (i > 0 && eigenvalues_(i) < eigenvalues_(i - 1))
      throw DomainError("ProjectionFamily: eigenvalues must be ascending");
    if (i == 0 || eigenvalues_(i) - eigenvalues_(i - 1) > tolerance) groups_.emplace_back();
    groups_.back().push_back(i);
    group_of_[static_cast<std::size_t>(i)] = static_cast<int>(groups_.size()) - 1;
  }
  labels_.reserve(groups_.size());
  for (const auto& g : groups_) {
    double sum = 0.0;
    for (Index i : g) sum += eigenvalues_(i);
    labels_.push_back(sum / static_cast<double>(g.size()));
  }
}

ProjectionFamily ProjectionFamily::from_decomposition(const SpectralDecomposition& d, double tolerance) {
  return ProjectionFamily(d.basis, d.eigenvalues, tolerance, false);
}

ProjectionFamily ProjectionFamily::standard(const RealVector& labels, double tolerance) {
  const Index n = labels.size();
  return ProjectionFamily(Matrix::Identity(n, n), labels, tolerance, true);
}

Matrix ProjectionFamily::projection(int group) const {
  const auto& members = groups_.at(static_cast<std::size_t>(group));
  Matrix p = Matrix::Zero(dim(), dim());
  for (Index i : members) p += basis_.col(i) * basis_.col(i).adjoint();
  return p;
}

KernelMatrix KernelMatrix::constant(Index rows, Index cols, Complex value) {
  return KernelMatrix{Matrix::Constant(rows, cols, value)};
}

KernelMatrix KernelMatrix::from(Index rows, Index cols, const std::function<Complex(int, int)>& entry) {
  Matrix values(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index k = 0; k < rows; ++k) values(k, j) = entry(static_cast<int>(k), static_cast<int>(j));
  return KernelMatrix{std::move(values)};
}

Matrix schur_multiply(const KernelMatrix& phi, const Matrix& x, const ProjectionFamily& left,
                      const ProjectionFamily& right) {
  check_conformable(x, left, right, "schur_multiply");
  if (phi.values.rows() != left.group_count() || phi.values.cols() != right.group_count())
    throw DimensionError("schur_multiply: kernel shape does not match the families' groups");
  Matrix local = to_local(x, left, right);
  for (Index b = 0; b < local.cols(); ++b) {
    const int j = right.group_of(b);
    for (Index a = 0; a < local.rows(); ++a) local(a, b) *= phi.values(left.group_of(a), j);
  }
  return from_local(local, left, right);
}

KernelMatrix divided_difference_kernel(const ScalarFunction& f, const ProjectionFamily& left,
                                       const ProjectionFamily& right) {
  const auto& lk = left.labels();
  const auto& rj = right.labels();
  std::vector<Complex> fl(lk.size()), fr(rj.size());
  for (std::size_t i = 0; i < lk.size(); ++i) fl[i] = f(lk[i]);
  for (std::size_t i = 0; i < rj.size(); ++i) fr[i] = f(rj[i]);
  return KernelMatrix::from(left.group_count(), right.group_count(), [&](int k, int j) {
    const double gap = lk[k] - rj[j];
    if (std::abs(gap) <= kCoincidenceTolerance) return Complex(0.0);
    return (fl[k] - fr[j]) / gap;
  });
}

Matrix triangular_truncate(const Matrix& x, const ProjectionFamily& family, TrianglePart part) {
  const Index g = family.group_count();
  const auto kernel = KernelMatrix::from(g, g, [part](int k, int j) {
    switch (part) {
      case TrianglePart::upper: return Complex(k <= j ? 1.0 : 0.0);
      case TrianglePart::lower: return Complex(k >= j ? 1.0 : 0.0);
      case TrianglePart::strict_upper: return Complex(k < j ? 1.0 : 0.0);
      case TrianglePart::strict_lower: return Complex(k > j ? 1.0 : 0.0);
    }
    return Complex(0.0);
  });
  return schur_multiply(kernel, x, family, family);
}

std::vector<std::int64_t> profile_on_family(const IntegerProfile& profile, const ProjectionFamily& family) {
  std::vector<std::int64_t> values;
  values.reserve(family.labels().size());
  for (double label : family.labels()) {
    const double rounded = std::round(label);
    if (std::abs(label - rounded) > 1e-9)
      throw DomainError("profile_on_family: group label " + std::to_string(label) + " is not an integer");
    values.push_back(profile(static_cast<std::int64_t>(rounded)));
  }
  return values;
}

Matrix marcinkiewicz_operator(const IntegerSequence& lambda, const IntegerProfile& profile,
                              const ProjectionFamily& family, const Matrix& x) {
  const auto f = profile_on_family(profile, family);
  const Index g = family.group_count();
  const auto kernel = KernelMatrix::from(g, g, [&](int k, int j) { return lambda.at(f[j] - f[k]); });
  return schur_multiply(kernel, x, family, family);
}

Matrix twist(const Matrix& x, double s, const IntegerProfile& profile, const ProjectionFamily& family,
             TwistMode mode, TwistSide side) {
  const auto f = profile_on_family(profile, family);
  const auto& labels = family.labels();
  const Index g = family.group_count();
  // factor for the pair k < j
  auto factor = [&](int k, int j) {
    if (mode == TwistMode::value) {
      const std::int64_t d = f[j] - f[k];
      if (d <= 0) return Complex(0.0);
      return std::polar(1.0, s * std::log(static_cast<double>(d)));
    }
    const double d = std::round(labels[j]) - std::round(labels[k]);
    return std::polar(1.0, -s * std::log(d));
  };
  const auto kernel = KernelMatrix::from(g, g, [&](int row, int col) {
    if (side == TwistSide::upper) return row < col ? factor(row, col) : Complex(0.0);
    return row > col ? factor(col, row) : Complex(0.0);
  });
  return schur_multiply(kernel, x, family, family);
}

Matrix conjugation_unitary(const IntegerProfile& profile, const ProjectionFamily& family, double t) {
  const auto f = profile_on_family(profile, family);
  Eigen::VectorXcd phases(family.dim());
  for (Index i = 0; i < family.dim(); ++i)
    phases(i) = std::polar(1.0, 2.0 * kPi * static_cast<double>(f[family.group_of(i)]) * t);
  return family.basis() * phases.asDiagonal() * family.basis().adjoint();
}

Matrix fourier_block(const Matrix& x, const IntegerProfile& profile, const ProjectionFamily& family,
                     std::int64_t n) {
  const auto f = profile_on_family(profile, family);
  const Index g = family.group_count();
  const auto kernel =
      KernelMatrix::from(g, g, [&](int k, int j) { return Complex(f[j] - f[k] == n ? 1.0 : 0.0); });
  return schur_multiply(kernel, x, family, family);
}

// ---------------------------------------------------------------------------

namespace {

double map_ratio(const MatrixMap& map, const Matrix& x, SchattenIndex alpha) {
  const double denom = schatten_norm(x, alpha);
  if (denom == 0.0) return 0.0;
  return schatten_norm(map(x), alpha) / denom;
}

Matrix starting_point(const MatrixMap& map, int start, Index dim, Rng& rng) {
  switch (start % 5) {
    case 0:
      return random_gaussian(dim, dim, rng);
    case 1: {
      // rank one with unimodular coordinates
      std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
      Eigen::VectorXcd u(dim), v(dim);
      for (Index i = 0; i < dim; ++i) u(i) = std::polar(1.0, angle(rng));
      for (Index i = 0; i < dim; ++i) v(i) = std::polar(1.0, angle(rng));
      return u * v.adjoint();
    }
    case 2: {
      const Eigen::VectorXcd u = random_gaussian(dim, 1, rng);
      const Eigen::VectorXcd v = random_gaussian(dim, 1, rng);
      return u * v.adjoint();
    }
    case 3: {
      std::uniform_int_distribution<Index> pick(0, dim - 1);
      Matrix e = Matrix::Zero(dim, dim);
      const Index k = pick(rng);
      const Index j = pick(rng);
      e(k, j) = 1.0;
      return e;
    }
    default: {
      // a few power steps pull a Gaussian start toward the high-gain
      // directions of T on S^2
      Matrix x = random_gaussian(dim, dim, rng);
      for (int k = 0; k < 16; ++k) {
        Matrix y = map(x);
        const double norm = y.norm();
        if (!(norm > 0.0)) break;
        x = y / norm;
      }
      return x;
    }
  }
}

void check_linearity(const MatrixMap& map, Index dim, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xC0FFEE));
  const Matrix x = random_gaussian(dim, dim, rng);
  const Matrix y = random_gaussian(dim, dim, rng);
  const Complex a(0.7, -0.3);
  const Complex b(-1.1, 0.4);
  const Matrix tx = map(x);
  const Matrix ty = map(y);
  const Matrix combined = map(a * x + b * y);
  if (combined.rows() != dim || combined.cols() != dim)
    throw DimensionError("estimate_map_norm: map changes the matrix shape");
  const double scale = std::abs(a) * tx.norm() + std::abs(b) * ty.norm() + combined.norm();
  const double defect = (combined - a * tx - b * ty).norm();
  if (defect > 1e-9 * std::max(scale, 1e-300) && defect > 1e-300) {
    std::ostringstream msg;
    msg << "estimate_map_norm: map failed the linearity probe (defect " << defect << ")";
    throw ContractError(msg.str());
  }
}

}  // namespace

MapNormEstimate estimate_map_norm(const MatrixMap& map, SchattenIndex alpha, Index dim,
                                  const MapNormOptions& options) {
  if (dim < 1) throw DomainError("estimate_map_norm: dim must be positive");
  if (options.starts < 1 || options.steps < 0) throw DomainError("estimate_map_norm: invalid start/step counts");
  check_linearity(map, dim, options.seed);

  struct StartResult {
    double ratio = 0.0;
    Matrix witness;
  };
  std::vector<StartResult> results(static_cast<std::size_t>(options.starts));
  parallel_for(results.size(), [&](std::size_t i) {
    Rng rng(derive_seed(options.seed, i));
    Matrix x = starting_point(map, static_cast<int>(i), dim, rng);
    double best = map_ratio(map, x, alpha);
    double scale = options.scale;
    for (int step = 0; step < options.steps; ++step) {
      Matrix direction;
      if (step % 2 == 0) {
        direction = random_gaussian(dim, dim, rng);
      } else {
        const Eigen::VectorXcd u = random_gaussian(dim, 1, rng);
        const Eigen::VectorXcd v = random_gaussian(dim, 1, rng);
        direction = u * v.adjoint();
      }
      const Matrix candidate = x + (scale * x.norm() / direction.norm()) * direction;
      const double ratio = map_ratio(map, candidate, alpha);
      if (ratio > best) {
        best = ratio;
        x = candidate;
      } else {
        scale *= options.decay;
      }
    }
    results[i] = StartResult{best, x / x.norm()};
  });

  MapNormEstimate out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (out.best_start < 0 || results[i].ratio > out.estimate) {
      out.estimate = results[i].ratio;
      out.witness = results[i].witness;
      out.best_start = static_cast<int>(i);
    }
  }
  return out;
}

}  // namespace oplip
