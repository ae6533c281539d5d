// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Tolerances and ensembles are fixed here; they are not tuned per run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "oplip/doi.hpp"
#include "oplip/experiments.hpp"
#include "oplip/kernels.hpp"
#include "oplip/multipliers.hpp"
#include "oplip/random.hpp"
#include "oplip/serialize.hpp"

using namespace oplip;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

// Runs one criterion; the runtime budget is part of the verdict.
bool criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = secs <= budget_s;
  const bool pass = o.pass && in_time;
  std::printf("criterion %d: %s  %s: %s [%.1f s, budget %.0f s%s]\n", id, pass ? "PASS" : "FAIL", name,
              o.detail.c_str(), secs, budget_s, in_time ? "" : ", over budget");
  std::fflush(stdout);
  return pass;
}

const SchattenIndex kInf = SchattenIndex::infinity();

struct Triple {
  std::string f_name;
  ScalarFunction f;
  HermitianOperator a;
  HermitianOperator b;
};

// 510 triples: dims 2..64, every catalog function, three pair shapes
// (independent, rank-one nudge, one nearly shared eigenvalue).
std::vector<Triple> identity_ensemble() {
  std::vector<Triple> out;
  const auto& names = catalog_names();
  for (std::uint64_t i = 0; i < 510; ++i) {
    const std::uint64_t seed = derive_seed(2718, i);
    Rng rng(seed);
    const Index dim = 2 + static_cast<Index>(i % 63);
    const std::string& name = names[i % names.size()];
    const HermitianOperator a = HermitianOperator::random(dim, rng);
    Matrix b;
    switch (i % 3) {
      case 0:
        b = random_hermitian_matrix(dim, rng);
        break;
      case 1: {
        const Eigen::VectorXcd v = random_unit_vector(dim, rng);
        b = a.matrix() + 0.3 * (v * v.adjoint());
        break;
      }
      default: {
        // A - B of order one, but one shared eigenvector whose eigenvalue moves by 1e-9
        const Eigen::VectorXcd e = eig_hermitian(a).basis.col(0);
        const Matrix q = Matrix::Identity(dim, dim) - e * e.adjoint();
        b = a.matrix() + q * random_hermitian_matrix(dim, rng) * q + 1e-9 * (e * e.adjoint());
        break;
      }
    }
    out.push_back({name, catalog_function(name, seed), a, HermitianOperator(b)});
  }
  return out;
}

Outcome perturbation_identity(const std::vector<Triple>& ensemble) {
  double worst_strict = 0.0, worst_relaxed = 0.0;
  int relaxed = 0, failures = 0;
  for (const auto& t : ensemble) {
    const double gap = min_cross_spectral_gap(eig_hermitian(t.a), eig_hermitian(t.b));
    const Matrix diff =
        apply_function(t.f, eig_hermitian(t.a)).matrix() - apply_function(t.f, eig_hermitian(t.b)).matrix();
    const double rel = perturbation_identity_residual(t.f, t.a, t.b) / std::max(1.0, diff.norm());
    if (gap < 1e-6) {
      ++relaxed;
      worst_relaxed = std::max(worst_relaxed, rel);
      if (rel > 1e-6) ++failures;
    } else {
      worst_strict = std::max(worst_strict, rel);
      if (rel > 1e-9) ++failures;
    }
  }
  std::ostringstream d;
  d << ensemble.size() << " triples, worst residual " << fmt(worst_strict) << " (<= 1e-9), " << relaxed
    << " small-gap triples worst " << fmt(worst_relaxed) << " (<= 1e-6), failures " << failures;
  return {failures == 0 && ensemble.size() >= 500, d.str()};
}

Outcome s2_sharpness(const std::vector<Triple>& ensemble) {
  double worst_excess = -1.0;
  int failures = 0;
  for (const auto& t : ensemble) {
    if (t.a == t.b) continue;
    const double excess = lipschitz_ratio(t.f, t.a, t.b, SchattenIndex(2.0)) - t.f.lip_bound();
    worst_excess = std::max(worst_excess, excess);
    if (excess > 1e-9) ++failures;
  }
  double worst_identity = 0.0;
  for (Index dim : {4, 16, 32}) {
    const ExperimentRecord r = estimate_lipschitz_constant(functions::identity(), SchattenIndex(2.0), dim, {16, 40, 1});
    worst_identity = std::max(worst_identity, std::abs(r.best_ratio - 1.0));
  }
  std::ostringstream d;
  d << "max(ratio - lip) " << fmt(worst_excess) << " (<= 1e-9) on " << ensemble.size()
    << " triples, |identity estimate - 1| " << fmt(worst_identity) << " (<= 1e-6)";
  return {failures == 0 && worst_identity <= 1e-6, d.str()};
}

Outcome ratio_decomposition() {
  const ScalarFunction cutoff = build_cutoff();
  const FourierWeight g = fourier_weight(cutoff);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double ratio = std::exp(std::log(0.05) + i * (std::log(2.0) - std::log(0.05)) / 49.0);
    for (int j = 0; j < 50; ++j) {
      const double mu = std::exp(std::log(1e-3) + j * (std::log(1e3) - std::log(1e-3)) / 49.0);
      worst = std::max(worst, reconstruct_ratio(g, ratio * mu, mu).relative_error);
    }
  }
  const double total = std::abs(g.total() - 1.0);
  const FourierWeight wide = fourier_weight(cutoff, FourierGrid{0.01, 400.0});
  const FourierWeight fine = fourier_weight(cutoff, FourierGrid{0.005, 200.0});
  double drift = 0.0;
  bool finite = true;
  for (int n = 0; n <= 3; ++n) {
    const double m = moment(g, n);
    finite = finite && std::isfinite(m);
    drift = std::max({drift, std::abs(moment(wide, n) / m - 1.0), std::abs(moment(fine, n) / m - 1.0)});
  }
  std::ostringstream d;
  d << "max reconstruction error " << fmt(worst) << " (<= 1e-5), |int g - 1| " << fmt(total)
    << " (<= 1e-6), moment drift under grid doubling " << fmt(drift) << " (<= 1e-4)";
  return {worst <= 1e-5 && total <= 1e-6 && finite && drift <= 1e-4, d.str()};
}

Outcome duhamel() {
  double worst_err = 0.0, worst_excess = -1.0;
  int instances = 0;
  for (std::uint64_t i = 0; i < 64; ++i) {
    Rng rng(derive_seed(4, i));
    const Index dim = 1 + static_cast<Index>(i % 16);
    const HermitianOperator a = HermitianOperator::random(dim, rng, 1.0 + static_cast<double>(i % 3));
    const HermitianOperator b = HermitianOperator::random(dim, rng);
    for (double r : {-4.0, -2.5, -0.5, 0.5, 1.0, 2.0, 3.0, 4.0}) {
      // oracle independent of the spectral path: Pade matrix exponential
      const Matrix ea = (Complex(0.0, r) * a.matrix()).exp();
      const Matrix eb = (Complex(0.0, r) * b.matrix()).exp();
      const Matrix direct = ea - eb;
      worst_err = std::max(worst_err, (duhamel_difference(a, b, r, 64) - direct).norm());
      worst_excess = std::max(worst_excess, schatten_norm(direct, kInf) -
                                                std::abs(r) * schatten_norm(a.matrix() - b.matrix(), kInf));
      ++instances;
    }
  }
  std::ostringstream d;
  d << instances << " instances, max quadrature error " << fmt(worst_err) << " (<= 1e-8), max(lhs - |r| ||A-B||) "
    << fmt(worst_excess) << " (<= 1e-8)";
  return {worst_err <= 1e-8 && worst_excess <= 1e-8, d.str()};
}

Outcome dyadic() {
  double worst = -1.0;
  for (double s : {0.5, 1.0, 3.0, 10.0})
    for (int k = 0; k <= 12; ++k) worst = std::max(worst, dyadic_variation(power_sequence(s), k) - s);
  std::ostringstream d;
  d << "max(variation - |s|) " << fmt(worst) << " (<= 1e-10)";
  return {worst <= 1e-10, d.str()};
}

Outcome decomposition_identity() {
  const FourierWeight g = fourier_weight(build_cutoff());
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng(derive_seed(6, i));
    const Index dim = 2 + static_cast<Index>(i % 23);
    const IntegerProfile p =
        random_integer_profile(static_cast<int>(dim), derive_seed(60, i), ProfileIncrements::one_or_two);
    const ProjectionFamily family = integer_family(dim);
    const Matrix x = triangular_truncate(random_gaussian(dim, dim, rng), family, TrianglePart::strict_upper);
    const Matrix y = triangular_truncate(random_gaussian(dim, dim, rng), family, TrianglePart::strict_lower);
    const KernelMatrix phi = divided_difference_kernel(profile_function(p), family, family);
    const Complex lhs = trace_pairing(y, schur_multiply(phi, x, family, family));
    Complex rhs = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double s = g.node(k);
      const Matrix xs = twist(x, s, p, family, TwistMode::value);
      const Matrix ys = twist(y, s, p, family, TwistMode::index, TwistSide::lower);
      rhs += g.weight(k) * g.samples()[k] * trace_pairing(ys, xs);
    }
    worst = std::max(worst, std::abs(lhs - rhs) / (x.norm() * y.norm()));
  }
  std::ostringstream d;
  d << "50 pairs, dims 2..24, max |tau(yTx) - int g tau(y_s x_s)| / (|x|_2 |y|_2) " << fmt(worst) << " (<= 1e-5)";
  return {worst <= 1e-5, d.str()};
}

Outcome boundedness_signature() {
  // fixed ensemble: 10 starts x 60 ascent steps per (alpha, dim), seed 7
  const SearchOptions search{10, 60, 7};
  const std::vector<Index> dims{8, 32, 128};
  std::ostringstream d;
  bool pass = true;
  for (const char* text : {"4/3", "2", "4"}) {
    const SchattenIndex alpha = SchattenIndex::parse(text);
    std::vector<double> est;
    for (Index dim : dims) est.push_back(multiplier_bound_study(ProfileSource::random(), alpha, dim, search).best_ratio);
    const bool grows = grows_beyond_band(est, 0.05);
    pass = pass && !grows;
    d << "alpha " << text << " multiplier " << est[0] << "/" << est[1] << "/" << est[2]
      << (grows ? " (growth)" : " (flat)") << "; ";
  }
  const auto trunc = truncation_growth_study(SchattenIndex(1.0), dims, search);
  const double factor = trunc.back().best_ratio / trunc.front().best_ratio;
  pass = pass && factor >= 1.5;
  d << "alpha 1 truncation " << trunc[0].best_ratio << "/" << trunc[1].best_ratio << "/" << trunc[2].best_ratio
    << ", dim 128 / dim 8 = " << factor << " (>= 1.5)";
  return {pass, d.str()};
}

Outcome discretization() {
  double worst_excess = -1.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(derive_seed(8, i));
    const Index dim = 1 + static_cast<Index>(i % 24);
    const HermitianOperator a = HermitianOperator::random(dim, rng, 1.0 + static_cast<double>(i % 5));
    for (int m : {1, 10, 100, 1000}) {
      const HermitianOperator am = discretize(a, DiscretizationGrid(m));
      worst_excess = std::max(worst_excess, schatten_norm(a.matrix() - am.matrix(), kInf) - 1.0 / m);
    }
  }
  int convergence_failures = 0;
  double final_gap = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    Rng rng(derive_seed(80, i));
    const Index dim = 4 + static_cast<Index>(i % 8);
    const HermitianOperator a = HermitianOperator::random(dim, rng);
    const HermitianOperator b = HermitianOperator::random(dim, rng);
    for (SchattenIndex alpha : {SchattenIndex(1.0), SchattenIndex(2.0), SchattenIndex(4.0)}) {
      const double exact = lipschitz_ratio(functions::absolute_value(), a, b, alpha);
      std::vector<double> gaps;
      for (int m : {10, 100, 1000})
        gaps.push_back(std::abs(lipschitz_ratio(functions::absolute_value(), discretize(a, DiscretizationGrid(m)),
                                                discretize(b, DiscretizationGrid(m)), alpha) -
                                exact));
      if (gaps[1] > gaps[0] + 1e-3 || gaps[2] > gaps[1] + 1e-3) ++convergence_failures;
      final_gap = std::max(final_gap, gaps[2]);
    }
  }
  std::ostringstream d;
  d << "100 operators, max(||A - A_m|| - 1/m) " << fmt(worst_excess) << " (<= 0); ratio gaps non-increasing within "
    << "1e-3 on 30 cases, failures " << convergence_failures << ", gap at m = 1000 " << fmt(final_gap);
  return {worst_excess <= 0.0 && convergence_failures == 0, d.str()};
}

Outcome commutator_reduction_check() {
  const std::vector<SchattenIndex> indices{SchattenIndex(1.0), SchattenIndex(4.0 / 3.0), SchattenIndex(2.0),
                                           SchattenIndex(4.0), kInf};
  double worst_norm = 0.0, worst_route = 0.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng(derive_seed(9, i));
    const Index dim = 1 + static_cast<Index>(i % 16);
    const HermitianOperator a = HermitianOperator::random(dim, rng);
    const HermitianOperator b = HermitianOperator::random(dim, rng);
    const std::string& name = catalog_names()[i % catalog_names().size()];
    const ScalarFunction f = catalog_function(name, i);
    const CommutatorReduction red = commutator_reduction(a, b);
    const Matrix uv = commutator(red.u.matrix(), red.v);
    const Matrix fuv = commutator(apply_function(f, eig_hermitian(red.u)).matrix(), red.v);
    for (SchattenIndex alpha : indices) {
      const double factor = alpha.is_infinite() ? 1.0 : std::pow(2.0, 1.0 / alpha.value());
      const double expected = factor * schatten_norm(a.matrix() - b.matrix(), alpha);
      worst_norm = std::max(worst_norm, std::abs(schatten_norm(uv, alpha) - expected) / expected);
      const double direct = lipschitz_ratio(f, a, b, alpha);
      const double route = schatten_norm(fuv, alpha) / schatten_norm(uv, alpha);
      worst_route = std::max(worst_route, std::abs(route - direct) / std::max(1.0, direct));
    }
  }
  std::ostringstream d;
  d << "200 pairs x 5 indices, max rel. error ||[u,v]|| vs 2^(1/alpha)||a-b|| " << fmt(worst_norm)
    << ", route difference " << fmt(worst_route) << " (<= 1e-10)";
  return {worst_norm <= 1e-10 && worst_route <= 1e-10, d.str()};
}

}  // namespace

int main() {
  int failed = 0;
  const std::vector<Triple> ensemble = identity_ensemble();
  failed += !criterion(1, "perturbation identity", 120, [&] { return perturbation_identity(ensemble); });
  failed += !criterion(2, "alpha = 2 sharpness", 120, [&] { return s2_sharpness(ensemble); });
  failed += !criterion(3, "ratio decomposition", 60, ratio_decomposition);
  failed += !criterion(4, "Duhamel quadrature", 30, duhamel);
  failed += !criterion(5, "dyadic variation", 30, dyadic);
  failed += !criterion(6, "decomposition identity cross-check", 120, decomposition_identity);
  failed += !criterion(7, "boundedness signature", 600, boundedness_signature);
  failed += !criterion(8, "discretization", 120, discretization);
  failed += !criterion(9, "commutator reduction", 120, commutator_reduction_check);
  std::printf("acceptance: %d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
