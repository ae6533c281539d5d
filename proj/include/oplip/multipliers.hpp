#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "oplip/core.hpp"
#include "oplip/function.hpp"
#include "oplip/kernels.hpp"
#include "oplip/spectra.hpp"

namespace oplip {

inline constexpr double kGroupingTolerance = 1e-9;

// Ordered family of mutually orthogonal spectral projections e_k summing to I.
// Eigenvalues closer than the grouping tolerance (chained through consecutive
// gaps) share a group; a group's label is the mean of its eigenvalues.
class ProjectionFamily {
 public:
  static ProjectionFamily from_decomposition(const SpectralDecomposition& d,
                                             double tolerance = kGroupingTolerance);
  // Family of the diagonal operator diag(labels) in the standard basis;
  // labels must be nondecreasing.
  static ProjectionFamily standard(const RealVector& labels, double tolerance = kGroupingTolerance);

  Index dim() const { return basis_.rows(); }
  Index group_count() const { return static_cast<Index>(labels_.size()); }
  const Matrix& basis() const { return basis_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const std::vector<double>& labels() const { return labels_; }
  const std::vector<std::vector<Index>>& groups() const { return groups_; }
  int group_of(Index column) const { return group_of_[static_cast<std::size_t>(column)]; }
  bool identity_basis() const { return identity_basis_; }

  // The projection e_k onto group k.
  Matrix projection(int group) const;

 private:
  ProjectionFamily(Matrix basis, RealVector eigenvalues, double tolerance, bool identity_basis);

  Matrix basis_;
  RealVector eigenvalues_;
  std::vector<double> labels_;
  std::vector<std::vector<Index>> groups_;
  std::vector<int> group_of_;
  bool identity_basis_;
};

// phi_{kj} indexed by (group of the left family) x (group of the right family).
struct KernelMatrix {
  Matrix values;

  static KernelMatrix constant(Index rows, Index cols, Complex value);
  static KernelMatrix from(Index rows, Index cols, const std::function<Complex(int, int)>& entry);
};

// sum_{k,j} phi_{kj} e_k x f_j with (e_k) = left and (f_j) = right.
Matrix schur_multiply(const KernelMatrix& phi, const Matrix& x, const ProjectionFamily& left,
                      const ProjectionFamily& right);

// Entry (k, j) = divided_difference(f, label_k, label_j).
KernelMatrix divided_difference_kernel(const ScalarFunction& f, const ProjectionFamily& left,
                                       const ProjectionFamily& right);

enum class TrianglePart { upper, lower, strict_upper, strict_lower };

Matrix triangular_truncate(const Matrix& x, const ProjectionFamily& family, TrianglePart part);

// Values f(label_k) per group. Labels must be integers inside the profile window.
std::vector<std::int64_t> profile_on_family(const IntegerProfile& profile, const ProjectionFamily& family);

// Sx = sum_{k,j} lambda(f(j) - f(k)) e_k x e_j.
Matrix marcinkiewicz_operator(const IntegerSequence& lambda, const IntegerProfile& profile,
                              const ProjectionFamily& family, const Matrix& x);

enum class TwistMode {
  value,  // factor (f(j) - f(k))^{is}
  index,  // factor (j - k)^{-is}, j and k the integer labels
};

enum class TwistSide {
  upper,  // blocks e_k x e_j, k < j
  lower,  // blocks e_j y e_k, k < j, scaled by the factor of (k, j)
};

// Keeps the strictly upper (or lower) blocks and scales each by its
// unimodular factor; 0^{is} is taken as 0.
Matrix twist(const Matrix& x, double s, const IntegerProfile& profile, const ProjectionFamily& family,
             TwistMode mode, TwistSide side = TwistSide::upper);

// u_t = sum_k e^{2 pi i f(k) t} e_k.
Matrix conjugation_unitary(const IntegerProfile& profile, const ProjectionFamily& family, double t);

// n-th Fourier coefficient of t -> u_t* x u_t: sum over f(j) - f(k) = n of e_k x e_j.
Matrix fourier_block(const Matrix& x, const IntegerProfile& profile, const ProjectionFamily& family,
                     std::int64_t n);

using MatrixMap = std::function<Matrix(const Matrix&)>;

struct MapNormOptions {
  int starts = 64;
  int steps = 200;
  double scale = 0.1;
  double decay = 0.9;
  std::uint64_t seed = 0;
};

struct MapNormEstimate {
  double estimate = 0.0;
  Matrix witness;
  int best_start = -1;
};

// Lower bound on the S^alpha -> S^alpha norm of a linear map on dim x dim
// matrices. Each seeded start is refined by perturbation ascent on
// ||T x||_alpha / ||x||_alpha: a proposal x + scale ||x||_F P / ||P||_F (P a
// Gaussian or rank-one Gaussian direction) is kept when it improves the
// ratio, otherwise scale shrinks by `decay`. Starts run in parallel; the
// result is the maximum, ties going to the lowest start index. Throws
// ContractError when a random linearity probe fails.
MapNormEstimate estimate_map_norm(const MatrixMap& map, SchattenIndex alpha, Index dim,
                                  const MapNormOptions& options = {});

}  // namespace oplip
