#pragma once

#include <cstdint>
#include <random>

#include "oplip/core.hpp"

namespace oplip {

using Rng = std::mt19937_64;

// Decorrelated child seed for stream `stream` of a parent seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Entries i.i.d. standard complex Gaussian (real and imaginary parts N(0, 1/2)).
Matrix random_gaussian(Index rows, Index cols, Rng& rng);

// Hermitian matrix from the Gaussian unitary ensemble scaled so the spectrum
// lies roughly in [-scale, scale].
Matrix random_hermitian_matrix(Index dim, Rng& rng, double scale = 1.0);

// Haar-distributed unitary (QR of a Gaussian matrix with phase correction).
Matrix random_unitary(Index dim, Rng& rng);

// Unit vector with i.i.d. complex Gaussian direction.
Eigen::VectorXcd random_unit_vector(Index dim, Rng& rng);

}  // namespace oplip
