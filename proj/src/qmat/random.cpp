#include "harvest/random.hpp"

#include <cmath>
#include <functional>
#include <numeric>

namespace harvest::qmat {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

Complex gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace

HermitianOp random_hermitian(std::size_t dim, Rng& rng, double scale) {
  ComplexMatrix g(dim, dim);
  for (auto& z : g.entries()) z = gaussian(rng);
  ComplexMatrix h = (g + g.adjoint()) * Complex(0.5 * scale);
  return HermitianOp(std::move(h));
}

Vector random_state(std::size_t dim, Rng& rng) {
  Vector v(dim);
  double n2 = 0.0;
  for (auto& z : v) {
    z = gaussian(rng);
    n2 += std::norm(z);
  }
  const double s = 1.0 / std::sqrt(n2);
  for (auto& z : v) z *= s;
  return v;
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  // Modified Gram-Schmidt on Gaussian columns.
  ComplexMatrix q(dim, dim);
  for (auto& z : q.entries()) z = gaussian(rng);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      Complex dot{};
      for (std::size_t i = 0; i < dim; ++i) dot += std::conj(q(i, j)) * q(i, k);
      for (std::size_t i = 0; i < dim; ++i) q(i, k) -= dot * q(i, j);
    }
    double n2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) n2 += std::norm(q(i, k));
    const double s = 1.0 / std::sqrt(n2);
    for (std::size_t i = 0; i < dim; ++i) q(i, k) *= s;
  }
  return q;
}

DensityMatrix random_density(std::vector<std::size_t> subsystem_dims, Rng& rng, std::size_t rank) {
  const std::size_t n =
      std::accumulate(subsystem_dims.begin(), subsystem_dims.end(), std::size_t{1}, std::multiplies<>());
  if (rank == 0 || rank > n) rank = n;
  ComplexMatrix g(n, rank);
  for (auto& z : g.entries()) z = gaussian(rng);
  ComplexMatrix m = g * g.adjoint();
  m = (m + m.adjoint()) * Complex(0.5);
  m *= Complex(1.0 / m.trace().real());
  return DensityMatrix(std::move(m), std::move(subsystem_dims));
}

}  // namespace harvest::qmat
