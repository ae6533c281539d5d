#include "oplip/spectra.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "oplip/function.hpp"

namespace oplip {

HermitianOperator::HermitianOperator(const Matrix& entries) {
  if (entries.rows() != entries.cols())
    throw DimensionError("HermitianOperator: matrix is not square");
  if (!entries.allFinite()) throw DomainError("HermitianOperator: non-finite entry");
  const double scale = std::max(1.0, entries.norm());
  const double asym = (entries - entries.adjoint()).norm();
  if (asym > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "HermitianOperator: symmetry violation ||H - H*||_F = " << asym;
    throw SymmetryError(msg.str());
  }
  entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianOperator HermitianOperator::diagonal(const RealVector& values) {
  return HermitianOperator(values.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianOperator HermitianOperator::random(Index dim, Rng& rng, double scale) {
  return HermitianOperator(random_hermitian_matrix(dim, rng, scale));
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("HermitianOperator difference: dimension mismatch");
  return HermitianOperator(a.matrix() - b.matrix());
}

Matrix SpectralDecomposition::reconstruct() const {
  return basis * eigenvalues.cast<Complex>().asDiagonal() * basis.adjoint();
}

SchattenIndex::SchattenIndex(double value) : value_(value) {
  if (std::isnan(value) || value < 1.0) {
    std::ostringstream msg;
    msg << "SchattenIndex: alpha must lie in [1, inf], got " << value;
    throw DomainError(msg.str());
  }
}

SchattenIndex SchattenIndex::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  auto parse_double = [&](std::string_view part) {
    double v = 0.0;
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, v);
    if (ec != std::errc() || ptr != end || part.empty())
      throw DomainError("SchattenIndex: cannot parse alpha '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return SchattenIndex(parse_double(text));
  const std::string_view view(text);
  const double num = parse_double(view.substr(0, slash));
  const double den = parse_double(view.substr(slash + 1));
  if (den == 0.0) throw DomainError("SchattenIndex: zero denominator in '" + text + "'");
  return SchattenIndex(num / den);
}

std::string SchattenIndex::to_string() const {
  if (is_infinite()) return "inf";
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  out << value_;
  return out.str();
}

SpectralDecomposition eig_hermitian(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver did not converge");
  return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

HermitianOperator apply_function(const ScalarFunction& f, const SpectralDecomposition& d) {
  Eigen::VectorXcd values(d.dim());
  for (Index i = 0; i < d.dim(); ++i) {
    const Complex v = f(d.eigenvalues(i));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError("apply_function: " + f.label() + " is not finite on the spectrum");
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
      throw DomainError("apply_function: " + f.label() + " is not real on the spectrum");
    values(i) = v.real();
  }
  return HermitianOperator(d.basis * values.asDiagonal() * d.basis.adjoint());
}

RealVector singular_values(const Matrix& x) {
  if (!x.allFinite()) throw DomainError("singular_values: non-finite entry");
  if (x.size() == 0) return RealVector();
  if (std::min(x.rows(), x.cols()) <= 16) {
    Eigen::JacobiSVD<Matrix> svd(x);
    return svd.singularValues();
  }
  Eigen::BDCSVD<Matrix> svd(x);
  return svd.singularValues();
}

double schatten_norm(const Matrix& x, SchattenIndex alpha) {
  const RealVector s = singular_values(x);
  if (s.size() == 0) return 0.0;
  const double top = s.maxCoeff();
  if (top == 0.0) return 0.0;
  if (alpha.is_infinite()) return top;
  const double p = alpha.value();
  if (p == 1.0) return s.sum();
  if (p == 2.0) return x.norm();
  double acc = 0.0;
  for (Index i = 0; i < s.size(); ++i) acc += std::pow(s(i) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

SchattenIndex dual_index(SchattenIndex alpha) {
  if (alpha.is_infinite()) return SchattenIndex(1.0);
  if (alpha.value() == 1.0) return SchattenIndex::infinity();
  return SchattenIndex(alpha.value() / (alpha.value() - 1.0));
}

Complex trace_pairing(const Matrix& y, const Matrix& x) {
  if (y.cols() != x.rows() || y.rows() != x.cols())
    throw DimensionError("trace_pairing: y and x are not conformable");
  return (y.transpose().array() * x.array()).sum();
}

}  // namespace oplip
