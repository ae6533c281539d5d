#include "oplip/random.hpp"

#include <cmath>

namespace oplip {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix m(rows, cols);
  // column-major fill order is part of the reproducibility contract
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

Matrix random_hermitian_matrix(Index dim, Rng& rng, double scale) {
  const Matrix g = random_gaussian(dim, dim, rng);
  // off-diagonal variance 2, so the semicircle radius is 2 sqrt(2 dim) before scaling
  return (g + g.adjoint()) * (scale / (2.0 * std::sqrt(2.0 * static_cast<double>(dim))));
}

Matrix random_unitary(Index dim, Rng& rng) {
  const Matrix g = random_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Eigen::VectorXcd random_unit_vector(Index dim, Rng& rng) {
  Eigen::VectorXcd v = random_gaussian(dim, 1, rng);
  return v / v.norm();
}

}  // namespace oplip
