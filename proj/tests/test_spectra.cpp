#include <gtest/gtest.h>

#include <cmath>

#include "oplip/function.hpp"
#include "oplip/random.hpp"
#include "oplip/serialize.hpp"
#include "oplip/spectra.hpp"

using namespace oplip;

namespace {

const SchattenIndex kInf = SchattenIndex::infinity();

// Oracle: singular values as square roots of the eigenvalues of X* X.
double norm_via_gram(const Matrix& x, SchattenIndex alpha) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x.adjoint() * x);
  RealVector s = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  if (alpha.is_infinite()) return s.maxCoeff();
  return std::pow(s.array().pow(alpha.value()).sum(), 1.0 / alpha.value());
}

}  // namespace

TEST(Spectra, DiagonalEigenvaluesSorted) {
  const auto d = eig_hermitian(HermitianOperator::diagonal(RealVector{{3.0, 1.0, 2.0}}));
  EXPECT_DOUBLE_EQ(d.eigenvalues(0), 1.0);
  EXPECT_DOUBLE_EQ(d.eigenvalues(1), 2.0);
  EXPECT_DOUBLE_EQ(d.eigenvalues(2), 3.0);
  // basis is a permutation: every column has one unimodular entry
  for (Index j = 0; j < 3; ++j) EXPECT_NEAR(d.basis.col(j).cwiseAbs().maxCoeff(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(d.basis(1, 0)), 1.0, 1e-14);
}

TEST(Spectra, PauliX) {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const auto d = eig_hermitian(HermitianOperator(x));
  EXPECT_NEAR(d.eigenvalues(0), -1.0, 1e-15);
  EXPECT_NEAR(d.eigenvalues(1), 1.0, 1e-15);
  const Complex ratio = d.basis(1, 0) / d.basis(0, 0);
  EXPECT_NEAR(std::abs(ratio + 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(d.basis(1, 1) / d.basis(0, 1) - 1.0), 0.0, 1e-14);
}

TEST(Spectra, RandomReconstruction) {
  Rng rng(42);
  const HermitianOperator h = HermitianOperator::random(8, rng);
  const auto d = eig_hermitian(h);
  EXPECT_LE((d.reconstruct() - h.matrix()).norm(), 1e-10 * std::max(1.0, h.matrix().norm()));
  EXPECT_LE((d.basis.adjoint() * d.basis - Matrix::Identity(8, 8)).norm(), 1e-10);
}

TEST(Spectra, RejectsNonHermitian) {
  Matrix x(2, 2);
  x << 0, 1, 0, 0;
  EXPECT_THROW(HermitianOperator{x}, SymmetryError);
  EXPECT_THROW(HermitianOperator{Matrix::Zero(2, 3)}, DimensionError);
}

TEST(Spectra, AcceptsRoundoffAsymmetry) {
  Matrix x(2, 2);
  x << 1, Complex(1, 1e-14), 1, 2;
  EXPECT_NO_THROW(HermitianOperator{x});
}

TEST(Spectra, ApplyFunctionIdentityAndAbs) {
  Rng rng(1);
  const HermitianOperator h = HermitianOperator::random(6, rng);
  const auto d = eig_hermitian(h);
  EXPECT_LE((apply_function(functions::identity(), d).matrix() - h.matrix()).norm(), 1e-12);

  const auto diag = eig_hermitian(HermitianOperator::diagonal(RealVector{{-2.0, 3.0}}));
  const Matrix abs = apply_function(functions::absolute_value(), diag).matrix();
  EXPECT_NEAR(abs(0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(abs(1, 1).real(), 3.0, 1e-14);

  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const Matrix id = apply_function(functions::absolute_value(), eig_hermitian(HermitianOperator(x))).matrix();
  EXPECT_LE((id - Matrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(Spectra, ApplyFunctionRejectsNonFinite) {
  const ScalarFunction bad("log", [](double t) { return Complex(std::log(t)); }, 1.0);
  const auto d = eig_hermitian(HermitianOperator::diagonal(RealVector{{-1.0, 1.0}}));
  EXPECT_THROW(apply_function(bad, d), DomainError);
}

TEST(Spectra, SchattenBasicValues) {
  for (double a : {1.0, 1.5, 2.0, 3.0, 7.0}) {
    EXPECT_NEAR(schatten_norm(Matrix::Identity(5, 5), SchattenIndex(a)), std::pow(5.0, 1.0 / a), 1e-13);
  }
  EXPECT_DOUBLE_EQ(schatten_norm(Matrix::Identity(5, 5), kInf), 1.0);

  Rng rng(3);
  const Eigen::VectorXcd u = random_unit_vector(7, rng);
  const Eigen::VectorXcd v = random_unit_vector(7, rng);
  for (double a : {1.0, 4.0 / 3.0, 2.0, 4.0}) EXPECT_NEAR(schatten_norm(u * v.adjoint(), SchattenIndex(a)), 1.0, 1e-12);
  EXPECT_NEAR(schatten_norm(u * v.adjoint(), kInf), 1.0, 1e-12);

  Matrix n(2, 2);
  n << 0, 2, 0, 0;
  EXPECT_NEAR(schatten_norm(n, SchattenIndex(1.0)), 2.0, 1e-14);
  EXPECT_NEAR(schatten_norm(n, kInf), 2.0, 1e-14);
  EXPECT_EQ(schatten_norm(Matrix::Zero(4, 4), SchattenIndex(3.0)), 0.0);
  EXPECT_EQ(schatten_norm(Matrix::Zero(4, 4), kInf), 0.0);
}

TEST(Spectra, SchattenMatchesGramOracle) {
  Rng rng(11);
  for (Index dim : {1, 3, 10, 20, 40}) {
    const Matrix x = random_gaussian(dim, dim, rng);
    for (SchattenIndex a : {SchattenIndex(1.0), SchattenIndex(4.0 / 3.0), SchattenIndex(2.5), kInf})
      EXPECT_NEAR(schatten_norm(x, a), norm_via_gram(x, a), 1e-10 * norm_via_gram(x, a)) << dim;
  }
  const Matrix rect = random_gaussian(3, 7, rng);
  EXPECT_NEAR(schatten_norm(rect, SchattenIndex(3.0)), norm_via_gram(rect, SchattenIndex(3.0)), 1e-12);
}

TEST(Spectra, SchattenRejectsNonFinite) {
  Matrix x = Matrix::Identity(2, 2);
  x(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(schatten_norm(x, SchattenIndex(2.0)), DomainError);
}

TEST(Spectra, UnitaryInvarianceMonotonicityTriangle) {
  const std::vector<SchattenIndex> indices{SchattenIndex(1.0), SchattenIndex(4.0 / 3.0), SchattenIndex(2.0),
                                           SchattenIndex(4.0), SchattenIndex(9.0), kInf};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Index dim = 2 + static_cast<Index>(seed % 9);
    const Matrix x = random_gaussian(dim, dim, rng);
    const Matrix y = random_gaussian(dim, dim, rng);
    const Matrix u = random_unitary(dim, rng);
    const Matrix v = random_unitary(dim, rng);
    double previous = std::numeric_limits<double>::infinity();
    for (SchattenIndex a : indices) {
      const double nx = schatten_norm(x, a);
      EXPECT_NEAR(schatten_norm(u * x * v, a), nx, 1e-10 * std::max(1.0, nx));
      EXPECT_LE(nx, previous + 1e-12);
      previous = nx;
      EXPECT_LE(schatten_norm(x + y, a), nx + schatten_norm(y, a) + 1e-12);
    }
  }
}

TEST(Spectra, DualIndex) {
  EXPECT_EQ(dual_index(SchattenIndex(2.0)).value(), 2.0);
  EXPECT_TRUE(dual_index(SchattenIndex(1.0)).is_infinite());
  EXPECT_EQ(dual_index(kInf).value(), 1.0);
  EXPECT_NEAR(dual_index(SchattenIndex(4.0)).value(), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(dual_index(SchattenIndex(4.0 / 3.0)).value(), 4.0, 1e-13);
}

TEST(Spectra, SchattenIndexParsing) {
  EXPECT_NEAR(SchattenIndex::parse("4/3").value(), 4.0 / 3.0, 1e-15);
  EXPECT_TRUE(SchattenIndex::parse("inf").is_infinite());
  EXPECT_EQ(SchattenIndex::parse("2").value(), 2.0);
  EXPECT_THROW(SchattenIndex::parse("0.5"), DomainError);
  EXPECT_THROW(SchattenIndex::parse("abc"), DomainError);
  EXPECT_THROW(SchattenIndex(std::nan("")), DomainError);
  EXPECT_EQ(SchattenIndex::parse(SchattenIndex(4.0 / 3.0).to_string()), SchattenIndex(4.0 / 3.0));
}

TEST(Spectra, TracePairing) {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1, 2, 3;
  EXPECT_NEAR(std::abs(trace_pairing(Matrix::Identity(3, 3), d) - 6.0), 0.0, 1e-15);

  Rng rng(4);
  Matrix x = random_gaussian(5, 5, rng);
  x /= x.norm();
  EXPECT_NEAR(trace_pairing(x.adjoint(), x).real(), 1.0, 1e-14);
  EXPECT_NEAR(trace_pairing(x.adjoint(), x).imag(), 0.0, 1e-14);
  EXPECT_THROW(trace_pairing(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), DimensionError);

  const Matrix a = random_gaussian(4, 3, rng);
  const Matrix b = random_gaussian(3, 4, rng);
  EXPECT_NEAR(std::abs(trace_pairing(b, a) - (b * a).trace()), 0.0, 1e-13);
}

TEST(Spectra, HolderInequality) {
  {
    Rng rng(7);
    const Matrix x = random_gaussian(6, 6, rng);
    const Matrix y = random_gaussian(6, 6, rng);
    EXPECT_LE(std::abs(trace_pairing(y, x)),
              schatten_norm(x, SchattenIndex(3.0)) * schatten_norm(y, SchattenIndex(1.5)) + 1e-12);
  }
  for (SchattenIndex a : {SchattenIndex(1.0), SchattenIndex(4.0 / 3.0), SchattenIndex(2.0), SchattenIndex(3.0), kInf}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng(derive_seed(99, seed));
      const Index dim = 1 + static_cast<Index>(seed % 8);
      const Matrix x = random_gaussian(dim, dim, rng);
      // y aligned with x's polar factor makes the inequality nearly tight
      const Matrix y = seed % 2 ? Matrix(x.adjoint()) : random_gaussian(dim, dim, rng);
      EXPECT_LE(std::abs(trace_pairing(y, x)),
                schatten_norm(x, a) * schatten_norm(y, dual_index(a)) * (1.0 + 1e-12));
    }
  }
}

TEST(Spectra, MatrixJsonRoundTrip) {
  Rng rng(5);
  const Matrix x = random_gaussian(3, 3, rng);
  const auto j = matrix_to_json(x);
  EXPECT_EQ(j.at("dim"), 3);
  EXPECT_EQ(j.at("entries").size(), 9u);
  EXPECT_DOUBLE_EQ(j.at("entries")[1][0].get<double>(), x(0, 1).real());
  EXPECT_EQ(matrix_from_json(j), x);
  EXPECT_THROW(matrix_to_json(Matrix::Zero(2, 3)), DimensionError);
}
