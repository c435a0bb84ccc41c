#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "harvest/qmat.hpp"

namespace harvest::qmat {

using Rng = std::mt19937_64;

// Per-trial seed from (seed, trial index), SplitMix64 finalizer. Lets suites
// run trials in any order and still replay a single failing trial.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Gaussian entries, symmetrized: (G + G^dagger) / 2 scaled by `scale`.
HermitianOp random_hermitian(std::size_t dim, Rng& rng, double scale = 1.0);

// Haar-distributed unit vector.
Vector random_state(std::size_t dim, Rng& rng);

// Haar unitary via QR of a Ginibre matrix.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

// Random mixed state of the given rank (rank 0 means full rank).
DensityMatrix random_density(std::vector<std::size_t> subsystem_dims, Rng& rng, std::size_t rank = 0);

}  // namespace harvest::qmat
