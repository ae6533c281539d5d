#include "oplip/experiments.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "oplip/doi.hpp"
#include "oplip/parallel.hpp"
#include "oplip/random.hpp"
#include "oplip/serialize.hpp"

namespace oplip {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

Matrix rank_one_hermitian(Index dim, Rng& rng) {
  const Eigen::VectorXcd v = random_unit_vector(dim, rng);
  std::bernoulli_distribution coin(0.5);
  return (coin(rng) ? 1.0 : -1.0) * (v * v.adjoint());
}

struct PairResult {
  double ratio = -1.0;
  Matrix a;
  Matrix b;
};

}  // namespace

std::string config_hash(const std::string& kind, const std::string& label, SchattenIndex alpha, Index dim,
                        int trials, int steps, std::uint64_t seed) {
  std::ostringstream canon;
  canon << kind << '|' << label << '|' << alpha.to_string() << '|' << dim << '|' << trials << '|' << steps << '|'
        << seed;
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canon.str()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream hex;
  hex << std::hex;
  hex.width(16);
  hex.fill('0');
  hex << h;
  return hex.str();
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"identity", "abs",      "relu",     "sin",         "pwl",
                                              "abs_moll", "relu_moll", "pwl_moll", "profile_moll"};
  return names;
}

ScalarFunction catalog_function(const std::string& name, std::uint64_t seed) {
  constexpr int kMollifierScale = 4;
  if (name == "identity") return functions::identity();
  if (name == "abs") return functions::absolute_value();
  if (name == "relu") return functions::relu();
  if (name == "sin") return functions::sine();
  if (name == "pwl") return functions::random_piecewise_linear(16, 0.25, seed);
  if (name == "abs_moll") return mollify(functions::absolute_value(), kMollifierScale);
  if (name == "relu_moll") return mollify(functions::relu(), kMollifierScale);
  if (name == "pwl_moll") return mollify(functions::random_piecewise_linear(16, 0.25, seed), kMollifierScale);
  if (name == "profile_moll") {
    // integer profile on a 1/4-spaced lattice, slopes in [0, 2]
    const ScalarFunction p = profile_function(random_integer_profile(8, seed));
    const ScalarFunction squeezed("profile", [p](double t) { return 0.25 * p(4.0 * t); }, p.lip_bound());
    std::vector<double> breaks;
    for (double b : p.breakpoints()) breaks.push_back(0.25 * b);
    return mollify(squeezed.with_breakpoints(std::move(breaks)), kMollifierScale);
  }
  throw DomainError("catalog_function: unknown function '" + name + "'");
}

ExperimentRecord estimate_lipschitz_constant(const ScalarFunction& f, SchattenIndex alpha, Index dim,
                                             const SearchOptions& options) {
  if (dim < 1 || options.trials < 1) throw DomainError("estimate_lipschitz_constant: need dim >= 1, trials >= 1");
  const auto start_time = Clock::now();
  const double lip = f.lip_bound();
  if (!(lip > 0.0)) throw DomainError("estimate_lipschitz_constant: f has zero Lipschitz bound");

  auto ratio_of = [&](const Matrix& a, const Matrix& b) {
    return lipschitz_ratio(f, HermitianOperator(a), HermitianOperator(b), alpha) / lip;
  };

  std::vector<PairResult> results(static_cast<std::size_t>(options.trials));
  parallel_for(results.size(), [&](std::size_t i) {
    Rng rng(derive_seed(options.seed, i));
    Matrix a = random_hermitian_matrix(dim, rng);
    Matrix b;
    std::uniform_real_distribution<double> log_eps(std::log(1e-3), 0.0);
    switch (i % 3) {
      case 0:
        b = random_hermitian_matrix(dim, rng);
        break;
      case 1:
        b = a + std::exp(log_eps(rng)) * rank_one_hermitian(dim, rng);
        break;
      default:
        b = a + std::exp(log_eps(rng)) * random_hermitian_matrix(dim, rng);
        break;
    }
    PairResult best{ratio_of(a, b), a, b};
    double step = 0.1 * (a - b).norm();
    std::uniform_int_distribution<int> which(0, 2);
    for (int k = 0; k < options.steps; ++k) {
      Matrix ca = best.a;
      Matrix cb = best.b;
      const int move = which(rng);
      if (move != 1) ca += step * rank_one_hermitian(dim, rng);
      if (move != 0) cb += step * rank_one_hermitian(dim, rng);
      if (ca == cb) {
        step *= 0.9;
        continue;
      }
      const double r = ratio_of(ca, cb);
      if (r > best.ratio) {
        best = PairResult{r, std::move(ca), std::move(cb)};
        step *= 1.1;
      } else {
        step *= 0.9;
      }
    }
    results[i] = std::move(best);
  });

  std::size_t best_index = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].ratio > results[best_index].ratio) best_index = i;

  ExperimentRecord record;
  record.kind = "lipschitz";
  record.label = f.label();
  record.alpha = alpha;
  record.dim = dim;
  record.trials = options.trials;
  record.steps = options.steps;
  record.seed = options.seed;
  record.best_ratio = results[best_index].ratio;
  record.witness = {{"A", matrix_to_json(results[best_index].a)}, {"B", matrix_to_json(results[best_index].b)}};
  record.metrics["lip_bound"] = lip;
  record.metrics["best_trial"] = static_cast<double>(best_index);
  record.config_hash = config_hash(record.kind, record.label, alpha, dim, options.trials, options.steps, options.seed);
  record.runtime_ms = elapsed_ms(start_time);
  return record;
}

Matrix commutator(const Matrix& x, const Matrix& y) {
  if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows())
    throw DimensionError("commutator: matrices must be square of equal size");
  return x * y - y * x;
}

CommutatorReduction commutator_reduction(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("commutator_reduction: dimension mismatch");
  const Index n = a.dim();
  Matrix u = Matrix::Zero(2 * n, 2 * n);
  u.topLeftCorner(n, n) = a.matrix();
  u.bottomRightCorner(n, n) = b.matrix();
  Matrix v = Matrix::Zero(2 * n, 2 * n);
  v.topRightCorner(n, n) = Matrix::Identity(n, n);
  v.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return CommutatorReduction{HermitianOperator(u), std::move(v)};
}

bool grows_beyond_band(const std::vector<double>& values, double band) {
  if (values.size() < 2) return false;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1] * (1.0 + band))) return false;
  return true;
}

ProjectionFamily integer_family(Index dim) {
  RealVector labels(dim);
  const Index offset = (dim - 1) / 2;
  for (Index i = 0; i < dim; ++i) labels(i) = static_cast<double>(i - offset);
  return ProjectionFamily::standard(labels);
}

std::vector<ExperimentRecord> truncation_growth_study(SchattenIndex alpha, const std::vector<Index>& dims,
                                                      const SearchOptions& options) {
  std::vector<ExperimentRecord> records;
  for (Index dim : dims) {
    if (dim < 1) throw DomainError("truncation_growth_study: dims must be >= 1");
    const auto start_time = Clock::now();
    const ProjectionFamily family = integer_family(dim);
    const MatrixMap map = [&family](const Matrix& x) {
      return triangular_truncate(x, family, TrianglePart::strict_upper);
    };
    const MapNormEstimate est =
        estimate_map_norm(map, alpha, dim, MapNormOptions{options.trials, options.steps, 0.1, 0.9, options.seed});
    ExperimentRecord record;
    record.kind = "truncation_growth";
    record.label = "strict_upper";
    record.alpha = alpha;
    record.dim = dim;
    record.trials = options.trials;
    record.steps = options.steps;
    record.seed = options.seed;
    record.best_ratio = est.estimate;
    record.witness = {{"x", matrix_to_json(est.witness)}};
    record.metrics["best_start"] = est.best_start;
    record.config_hash = config_hash(record.kind, record.label, alpha, dim, options.trials, options.steps, options.seed);
    record.runtime_ms = elapsed_ms(start_time);
    records.push_back(std::move(record));
  }
  return records;
}

IntegerProfile resolve_profile(const ProfileSource& source, Index dim, std::uint64_t seed) {
  const int window = static_cast<int>(std::max<Index>(1, dim));
  switch (source.kind) {
    case ProfileSource::Kind::identity:
      return IntegerProfile::identity(window);
    case ProfileSource::Kind::fixed:
      if (!source.profile) throw DomainError("resolve_profile: fixed source without a profile");
      return *source.profile;
    case ProfileSource::Kind::random:
      break;
  }
  return random_integer_profile(window, derive_seed(seed, 0x50524F46), source.increments);
}

ExperimentRecord multiplier_bound_study(const ProfileSource& source, SchattenIndex alpha, Index dim,
                                        const SearchOptions& options) {
  if (dim < 1) throw DomainError("multiplier_bound_study: dim must be >= 1");
  const auto start_time = Clock::now();
  const IntegerProfile profile = resolve_profile(source, dim, options.seed);
  const ProjectionFamily family = integer_family(dim);
  const KernelMatrix kernel = divided_difference_kernel(profile_function(profile), family, family);
  const MatrixMap map = [&](const Matrix& x) { return schur_multiply(kernel, x, family, family); };
  const MapNormEstimate est =
      estimate_map_norm(map, alpha, dim, MapNormOptions{options.trials, options.steps, 0.1, 0.9, options.seed});

  ExperimentRecord record;
  record.kind = "multiplier_bound";
  switch (source.kind) {
    case ProfileSource::Kind::identity: record.label = "identity_profile"; break;
    case ProfileSource::Kind::fixed: record.label = "fixed_profile"; break;
    case ProfileSource::Kind::random:
      record.label = source.increments == ProfileIncrements::zero_or_two ? "random_profile" : "random_strict_profile";
      break;
  }
  record.alpha = alpha;
  record.dim = dim;
  record.trials = options.trials;
  record.steps = options.steps;
  record.seed = options.seed;
  record.best_ratio = est.estimate;
  record.witness = {{"x", matrix_to_json(est.witness)}, {"profile", profile_to_json(profile)}};
  record.metrics["lip_bound"] = static_cast<double>(profile.max_increment());
  record.metrics["best_start"] = est.best_start;
  record.config_hash = config_hash(record.kind, record.label, alpha, dim, options.trials, options.steps, options.seed);
  record.runtime_ms = elapsed_ms(start_time);
  return record;
}

}  // namespace oplip
