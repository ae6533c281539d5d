#include "oplip/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oplip/doi.hpp"
#include "oplip/experiments.hpp"
#include "oplip/multipliers.hpp"
#include "oplip/random.hpp"
#include "oplip/spectra.hpp"

namespace oplip {

void SuiteResult::check(bool ok, const std::string& message) {
  ++assertions;
  if (!ok) failures.push_back(message);
}

int VerifyReport::assertions() const {
  int n = 0;
  for (const auto& s : suites) n += s.assertions;
  return n;
}

int VerifyReport::failures() const {
  int n = 0;
  for (const auto& s : suites) n += static_cast<int>(s.failures.size());
  return n;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json out;
  out["assertions"] = assertions();
  out["failures"] = failures();
  out["passed"] = passed();
  out["suites"] = nlohmann::json::array();
  for (const auto& s : suites)
    out["suites"].push_back(
        {{"name", s.name}, {"assertions", s.assertions}, {"failures", s.failures}, {"passed", s.passed()}});
  return out;
}

namespace {

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults{
      {"identity", 1e-9},   {"identity_relaxed", 1e-6}, {"s2", 1e-9},      {"reconstruction", 1e-5},
      {"duhamel", 1e-8},    {"commutator", 1e-10},      {"unitary", 1e-10},
  };
  return defaults;
}

std::string describe(const std::string& what, double value, double bound, Index dim, std::uint64_t seed) {
  std::ostringstream msg;
  msg.precision(6);
  msg << what << ": " << value << " exceeds " << bound << " (dim " << dim << ", seed " << seed << ")";
  return msg.str();
}

const std::vector<SchattenIndex>& test_indices() {
  static const std::vector<SchattenIndex> indices{SchattenIndex(1.0), SchattenIndex(4.0 / 3.0), SchattenIndex(2.0),
                                                  SchattenIndex(3.0), SchattenIndex(4.0), SchattenIndex::infinity()};
  return indices;
}

struct Context {
  const VerifyOptions& options;
  std::uint64_t stream(std::uint64_t suite, std::uint64_t instance) const {
    return derive_seed(options.seed, suite * 100000 + instance);
  }
  double tol(const std::string& key) const { return verify_tolerance(options, key); }
};

SuiteResult spectra_suite(const Context& ctx) {
  SuiteResult r{"spectra", 0, {}};
  std::uint64_t instance = 0;
  for (Index dim : ctx.options.dims) {
    for (int rep = 0; rep < 3; ++rep) {
      const std::uint64_t seed = ctx.stream(1, instance++);
      Rng rng(seed);
      const HermitianOperator h = HermitianOperator::random(dim, rng);
      const auto d = eig_hermitian(h);
      const double scale = std::max(1.0, h.matrix().norm());
      const double recon = (d.reconstruct() - h.matrix()).norm() / scale;
      r.check(recon <= ctx.tol("unitary"), describe("reconstruction", recon, ctx.tol("unitary"), dim, seed));
      const double orth = (d.basis.adjoint() * d.basis - Matrix::Identity(dim, dim)).norm();
      r.check(orth <= ctx.tol("unitary"), describe("basis orthonormality", orth, ctx.tol("unitary"), dim, seed));
      r.check(std::is_sorted(d.eigenvalues.begin(), d.eigenvalues.end()), "eigenvalues not ascending");

      const Matrix x = random_gaussian(dim, dim, rng);
      const Matrix y = random_gaussian(dim, dim, rng);
      const Matrix u = random_unitary(dim, rng);
      const Matrix v = random_unitary(dim, rng);
      double previous = std::numeric_limits<double>::infinity();
      for (SchattenIndex alpha : test_indices()) {
        const double nx = schatten_norm(x, alpha);
        const double rotated = schatten_norm(u * x * v, alpha);
        r.check(std::abs(rotated - nx) <= ctx.tol("unitary") * std::max(1.0, nx),
                describe("unitary invariance at " + alpha.to_string(), std::abs(rotated - nx), ctx.tol("unitary"),
                         dim, seed));
        r.check(nx <= previous + 1e-12, describe("monotonicity at " + alpha.to_string(), nx, previous, dim, seed));
        previous = nx;
        const double sum = schatten_norm(x + y, alpha);
        const double bound = nx + schatten_norm(y, alpha);
        r.check(sum <= bound * (1.0 + 1e-12),
                describe("triangle inequality at " + alpha.to_string(), sum, bound, dim, seed));
        const double pairing = std::abs(trace_pairing(y, x));
        const double holder = nx * schatten_norm(y, dual_index(alpha));
        r.check(pairing <= holder * (1.0 + 1e-12),
                describe("Holder at " + alpha.to_string(), pairing, holder, dim, seed));
      }
    }
  }
  return r;
}

SuiteResult perturbation_suite(const Context& ctx, SuiteResult& s2) {
  SuiteResult r{"perturbation_identity", 0, {}};
  std::uint64_t instance = 0;
  for (Index dim : ctx.options.dims) {
    for (const std::string& name : catalog_names()) {
      const std::uint64_t seed = ctx.stream(2, instance++);
      Rng rng(seed);
      const ScalarFunction f = catalog_function(name, seed);
      const HermitianOperator a = HermitianOperator::random(dim, rng);
      // alternate independent pairs and near pairs
      const HermitianOperator b = (instance % 2 == 0)
                                      ? HermitianOperator::random(dim, rng)
                                      : HermitianOperator(a.matrix() + 1e-3 * random_hermitian_matrix(dim, rng));
      const double gap = min_cross_spectral_gap(eig_hermitian(a), eig_hermitian(b));
      const double tol = gap < 1e-6 ? ctx.tol("identity_relaxed") : ctx.tol("identity");
      const Matrix diff = apply_function(f, eig_hermitian(a)).matrix() - apply_function(f, eig_hermitian(b)).matrix();
      const double residual = perturbation_identity_residual(f, a, b) / std::max(1.0, diff.norm());
      r.check(residual <= tol, describe("identity residual for " + name, residual, tol, dim, seed));
      const double ratio = lipschitz_ratio(f, a, b, SchattenIndex(2.0));
      s2.check(ratio <= f.lip_bound() + ctx.tol("s2"),
               describe("S^2 ratio for " + name, ratio, f.lip_bound() + ctx.tol("s2"), dim, seed));
    }
  }
  return r;
}

SuiteResult commutator_suite(const Context& ctx) {
  SuiteResult r{"commutator", 0, {}};
  std::uint64_t instance = 0;
  const ScalarFunction f = functions::absolute_value();
  for (Index dim : ctx.options.dims) {
    const std::uint64_t seed = ctx.stream(3, instance++);
    Rng rng(seed);
    const HermitianOperator a = HermitianOperator::random(dim, rng);
    const HermitianOperator b = HermitianOperator::random(dim, rng);
    const CommutatorReduction red = commutator_reduction(a, b);
    const Matrix c = commutator(red.u.matrix(), red.v);
    const Matrix fc = commutator(apply_function(f, eig_hermitian(red.u)).matrix(), red.v);
    for (SchattenIndex alpha : test_indices()) {
      const double factor = alpha.is_infinite() ? 1.0 : std::pow(2.0, 1.0 / alpha.value());
      const double expected = factor * schatten_norm(a.matrix() - b.matrix(), alpha);
      const double got = schatten_norm(c, alpha);
      r.check(std::abs(got - expected) <= ctx.tol("commutator") * expected,
              describe("[u,v] norm at " + alpha.to_string(), std::abs(got - expected), ctx.tol("commutator"), dim,
                       seed));
      const double route = schatten_norm(fc, alpha) / got;
      const double direct = lipschitz_ratio(f, a, b, alpha);
      r.check(std::abs(route - direct) <= ctx.tol("commutator") * std::max(1.0, direct),
              describe("route equality at " + alpha.to_string(), std::abs(route - direct), ctx.tol("commutator"),
                       dim, seed));
    }
  }
  return r;
}

SuiteResult decomposition_suite(const Context& ctx) {
  SuiteResult r{"decomposition", 0, {}};
  const FourierWeight g = fourier_weight(build_cutoff(ctx.options.bridge_sharpness), ctx.options.grid);
  const double total_error = std::abs(g.total() - 1.0);
  r.check(total_error <= 1e-6, describe("integral of g", total_error, 1e-6, 0, ctx.options.seed));
  const double tol = ctx.tol("reconstruction");
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double ratio = std::exp(std::log(0.05) + i * (std::log(2.0) - std::log(0.05)) / 9.0);
      const double mu = std::exp(std::log(1e-2) + j * (std::log(1e2) - std::log(1e-2)) / 9.0);
      const double err = reconstruct_ratio(g, ratio * mu, mu).relative_error;
      std::ostringstream what;
      what << "reconstruction at ratio " << ratio;
      r.check(err <= tol, describe(what.str(), err, tol, 0, ctx.options.seed));
    }
  }
  for (int n = 0; n <= 3; ++n) r.check(std::isfinite(moment(g, n)), "moment " + std::to_string(n) + " not finite");
  std::size_t mirror_failures = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g.samples()[i] - std::conj(g.samples()[g.size() - 1 - i])) > 1e-8) ++mirror_failures;
  r.check(mirror_failures == 0, "g(-s) = conj(g(s)) violated at " + std::to_string(mirror_failures) + " nodes");
  return r;
}

SuiteResult duhamel_suite(const Context& ctx) {
  SuiteResult r{"duhamel", 0, {}};
  std::uint64_t instance = 0;
  for (Index dim : ctx.options.dims) {
    const Index n = std::min<Index>(dim, 16);
    for (double radius : {-4.0, 0.5, 2.0, 4.0}) {
      const std::uint64_t seed = ctx.stream(4, instance++);
      Rng rng(seed);
      const HermitianOperator a = HermitianOperator::random(n, rng);
      const HermitianOperator b = HermitianOperator::random(n, rng);
      const Matrix direct = exponential_difference(a, b, radius);
      const double err = (duhamel_difference(a, b, radius, 64) - direct).norm();
      r.check(err <= ctx.tol("duhamel"), describe("Duhamel quadrature", err, ctx.tol("duhamel"), n, seed));
      const double lhs = schatten_norm(direct, SchattenIndex::infinity());
      const double rhs = std::abs(radius) * schatten_norm(a.matrix() - b.matrix(), SchattenIndex::infinity());
      r.check(lhs <= rhs + 1e-8, describe("exponential Lipschitz bound", lhs, rhs, n, seed));
    }
  }
  return r;
}

SuiteResult dyadic_suite() {
  SuiteResult r{"dyadic", 0, {}};
  for (double s : {0.5, 1.0, 3.0, 10.0}) {
    const IntegerSequence seq = power_sequence(s);
    for (int k = 0; k <= 12; ++k) {
      const double v = dyadic_variation(seq, k);
      r.check(v <= s + 1e-10, describe("dyadic variation block " + std::to_string(k), v, s, 0, 0));
    }
  }
  return r;
}

SuiteResult discretization_suite(const Context& ctx) {
  SuiteResult r{"discretization", 0, {}};
  std::uint64_t instance = 0;
  for (Index dim : ctx.options.dims) {
    for (int rep = 0; rep < 3; ++rep) {
      const std::uint64_t seed = ctx.stream(5, instance++);
      Rng rng(seed);
      const HermitianOperator a = HermitianOperator::random(dim, rng);
      for (int m : {1, 10, 100, 1000}) {
        const HermitianOperator am = discretize(a, DiscretizationGrid(m));
        const double err = schatten_norm(a.matrix() - am.matrix(), SchattenIndex::infinity());
        r.check(err <= 1.0 / m, describe("||A - A_m|| for m = " + std::to_string(m), err, 1.0 / m, dim, seed));
      }
    }
  }
  return r;
}

SuiteResult multiplier_suite(const Context& ctx) {
  SuiteResult r{"multipliers", 0, {}};
  std::uint64_t instance = 0;
  for (Index dim : ctx.options.dims) {
    const std::uint64_t seed = ctx.stream(6, instance++);
    Rng rng(seed);
    const HermitianOperator a = HermitianOperator::random(dim, rng);
    const HermitianOperator b = HermitianOperator::random(dim, rng);
    const auto left = ProjectionFamily::from_decomposition(eig_hermitian(a));
    const auto right = ProjectionFamily::from_decomposition(eig_hermitian(b));
    const KernelMatrix phi = divided_difference_kernel(functions::absolute_value(), left, right);
    const Matrix x = random_gaussian(dim, dim, rng);
    const Matrix y = random_gaussian(dim, dim, rng);
    const Complex c1(0.3, -1.2), c2(-0.7, 0.5);
    const Matrix combo = schur_multiply(phi, c1 * x + c2 * y, left, right);
    const Matrix parts = c1 * schur_multiply(phi, x, left, right) + c2 * schur_multiply(phi, y, left, right);
    const double lin = (combo - parts).norm() / std::max(1.0, parts.norm());
    r.check(lin <= 1e-10, describe("linearity", lin, 1e-10, dim, seed));

    const Matrix tx = schur_multiply(phi, x, left, right);
    r.check(tx.norm() <= x.norm() * (1.0 + 1e-10), describe("S^2 kernel bound", tx.norm(), x.norm(), dim, seed));

    const KernelMatrix phi_dagger = KernelMatrix::from(
        phi.values.cols(), phi.values.rows(), [&](int j, int k) { return std::conj(phi.values(k, j)); });
    const Matrix adj = schur_multiply(phi_dagger, x.adjoint(), right, left);
    const double cov = (tx.adjoint() - adj).norm() / std::max(1.0, tx.norm());
    r.check(cov <= 1e-10, describe("adjoint covariance", cov, 1e-10, dim, seed));

    const ProjectionFamily family = integer_family(dim);
    const IntegerProfile profile =
        random_integer_profile(static_cast<int>(dim), derive_seed(seed, 1), ProfileIncrements::one_or_two);
    const Matrix strict = triangular_truncate(x, family, TrianglePart::strict_upper);
    const Matrix twice = twist(twist(x, 1.7, profile, family, TwistMode::value), -1.7, profile, family,
                               TwistMode::value);
    const double comp = (twice - strict).norm() / std::max(1.0, strict.norm());
    r.check(comp <= 1e-12, describe("twist composition", comp, 1e-12, dim, seed));
    const double split =
        (triangular_truncate(x, family, TrianglePart::upper) +
         triangular_truncate(x, family, TrianglePart::strict_lower) - x)
            .norm();
    r.check(split <= 1e-14 * std::max(1.0, x.norm()), describe("upper + strict lower", split, 0.0, dim, seed));
  }
  return r;
}

SuiteResult mollifier_suite() {
  SuiteResult r{"mollifier", 0, {}};
  const ScalarFunction abs = functions::absolute_value();
  for (int n : {1, 2, 4, 8}) {
    const double mass_err = std::abs(Mollifier(n).mass() - 1.0);
    r.check(mass_err <= 1e-10, describe("mollifier mass n = " + std::to_string(n), mass_err, 1e-10, 0, 0));
    const double expected = std::sqrt(2.0 / kPi) / n;
    const double got = mollify(abs, n)(0.0).real();
    r.check(std::abs(got - expected) <= 1e-8,
            describe("mean absolute value n = " + std::to_string(n), std::abs(got - expected), 1e-8, 0, 0));
  }
  return r;
}

}  // namespace

const std::vector<std::string>& verify_tolerance_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : default_tolerances()) out.push_back(k);
    return out;
  }();
  return keys;
}

double verify_tolerance(const VerifyOptions& options, const std::string& key) {
  const auto& defaults = default_tolerances();
  if (!defaults.contains(key)) throw ConfigError("unknown tolerance key '" + key + "'");
  const auto it = options.tolerances.find(key);
  return it == options.tolerances.end() ? defaults.at(key) : it->second;
}

VerifyReport run_verification(const VerifyOptions& options) {
  for (const auto& [key, value] : options.tolerances) {
    verify_tolerance(options, key);
    if (!(value > 0.0)) throw ConfigError("tolerance '" + key + "' must be positive");
  }
  for (Index dim : options.dims)
    if (dim < 1) throw ConfigError("verify: dims must be >= 1");
  const Context ctx{options};
  VerifyReport report;
  report.suites.push_back(spectra_suite(ctx));
  SuiteResult s2{"s2_bound", 0, {}};
  report.suites.push_back(perturbation_suite(ctx, s2));
  report.suites.push_back(std::move(s2));
  report.suites.push_back(commutator_suite(ctx));
  report.suites.push_back(decomposition_suite(ctx));
  report.suites.push_back(duhamel_suite(ctx));
  report.suites.push_back(dyadic_suite());
  report.suites.push_back(discretization_suite(ctx));
  report.suites.push_back(multiplier_suite(ctx));
  report.suites.push_back(mollifier_suite());
  return report;
}

}  // namespace oplip
