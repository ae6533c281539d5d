#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oplip/core.hpp"
#include "oplip/function.hpp"
#include "oplip/kernels.hpp"
#include "oplip/multipliers.hpp"
#include "oplip/spectra.hpp"

namespace oplip {

// Seeded record of one ratio or norm-growth experiment. best_ratio is an
// empirical lower bound on the constant being probed, never an upper bound.
struct ExperimentRecord {
  std::string kind;
  std::string label;  // function or profile under test
  SchattenIndex alpha{2.0};
  Index dim = 0;
  int trials = 0;
  int steps = 0;
  std::uint64_t seed = 0;
  double best_ratio = 0.0;
  nlohmann::json witness;  // matrices, in the {dim, entries} schema
  std::map<std::string, double> metrics;
  std::string config_hash;
  std::int64_t runtime_ms = 0;

  // alpha in {1, inf}: outside the range where boundedness is claimed
  bool contrast() const { return alpha.is_infinite() || alpha.value() == 1.0; }
};

// FNV-1a over the fields that determine the result.
std::string config_hash(const std::string& kind, const std::string& label, SchattenIndex alpha, Index dim,
                        int trials, int steps, std::uint64_t seed);

// Shipped test functions by name: identity, abs, relu, sin, pwl (random
// +-1 slopes), and the mollified variants abs_moll, relu_moll, pwl_moll,
// profile_moll (n = 4). Seeded entries derive from `seed`.
ScalarFunction catalog_function(const std::string& name, std::uint64_t seed = 0);

const std::vector<std::string>& catalog_names();

struct SearchOptions {
  int trials = 64;
  int steps = 200;
  std::uint64_t seed = 0;
};

// Maximizes ||f(A) - f(B)||_alpha / ||A - B||_alpha (f normalized to
// Lipschitz bound 1) over seeded random Hermitian pairs, each refined by
// rank-one Hermitian perturbations of A and B with an adaptive step.
ExperimentRecord estimate_lipschitz_constant(const ScalarFunction& f, SchattenIndex alpha, Index dim,
                                             const SearchOptions& options = {});

struct CommutatorReduction {
  HermitianOperator u;  // diag(a, b)
  Matrix v;             // [[0, I], [I, 0]]
};

Matrix commutator(const Matrix& x, const Matrix& y);

CommutatorReduction commutator_reduction(const HermitianOperator& a, const HermitianOperator& b);

// Strict-upper triangular truncation against the standard family on each
// dimension; estimate_map_norm per dimension.
std::vector<ExperimentRecord> truncation_growth_study(SchattenIndex alpha, const std::vector<Index>& dims,
                                                      const SearchOptions& options = {});

struct ProfileSource {
  enum class Kind { random, identity, fixed };

  Kind kind = Kind::random;
  ProfileIncrements increments = ProfileIncrements::zero_or_two;
  std::optional<IntegerProfile> profile;

  static ProfileSource random(ProfileIncrements increments = ProfileIncrements::zero_or_two) {
    return ProfileSource{Kind::random, increments, std::nullopt};
  }
  static ProfileSource identity() { return ProfileSource{Kind::identity, ProfileIncrements::zero_or_two, std::nullopt}; }
  static ProfileSource fixed(IntegerProfile p) {
    return ProfileSource{Kind::fixed, ProfileIncrements::zero_or_two, std::move(p)};
  }
};

// True when every step along `values` grows by more than the relative band,
// i.e. growth that cannot be attributed to search noise. Fewer than two
// values never count as growth.
bool grows_beyond_band(const std::vector<double>& values, double band);

// Standard family on consecutive integer labels centred at 0, used by the
// integer-profile experiments.
ProjectionFamily integer_family(Index dim);

// The profile a ProfileSource yields for a dimension and seed (window = dim).
IntegerProfile resolve_profile(const ProfileSource& source, Index dim, std::uint64_t seed);

// Map norm estimate of the divided-difference Schur multiplier of an integer
// profile on integer_family(dim). metrics["lip_bound"] records the profile's
// largest increment.
ExperimentRecord multiplier_bound_study(const ProfileSource& source, SchattenIndex alpha, Index dim,
                                        const SearchOptions& options = {});

}  // namespace oplip
