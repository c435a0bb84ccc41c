#include <stdexcept>

#include "harvest/nogo.hpp"
#include "harvest/random.hpp"

namespace harvest::nogo {

WitnessResult max_output_negativity(const ComplexMatrix& target_source_unitary, std::size_t target_dim,
                                    std::size_t source_dim, std::size_t trials, std::uint64_t seed) {
  if (target_source_unitary.rows() != target_dim * source_dim || !target_source_unitary.is_square()) {
    throw qmat::DimensionError("max_output_negativity: unitary does not act on target (x) source");
  }
  WitnessResult result;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = qmat::derive_seed(seed, trial);
    qmat::Rng rng(trial_seed);
    const std::size_t ref_dim = 2 + rng() % (kMaxReferenceDim - 1);

    const qmat::Vector target = qmat::random_state(target_dim, rng);
    const qmat::Vector source_ref = qmat::random_state(source_dim * ref_dim, rng);
    const qmat::Vector psi = qmat::kron(target, source_ref);  // T (x) S (x) R

    // (U (x) 1_R) psi
    qmat::Vector out(psi.size());
    const std::size_t ts = target_dim * source_dim;
    for (std::size_t i = 0; i < ts; ++i)
      for (std::size_t j = 0; j < ts; ++j) {
        const qmat::Complex u = target_source_unitary(i, j);
        if (u == qmat::Complex{}) continue;
        for (std::size_t r = 0; r < ref_dim; ++r) out[i * ref_dim + r] += u * psi[j * ref_dim + r];
      }

    // trace out S
    const std::size_t tr = target_dim * ref_dim;
    ComplexMatrix rho(tr, tr);
    for (std::size_t t1 = 0; t1 < target_dim; ++t1)
      for (std::size_t r1 = 0; r1 < ref_dim; ++r1)
        for (std::size_t t2 = 0; t2 < target_dim; ++t2)
          for (std::size_t r2 = 0; r2 < ref_dim; ++r2) {
            qmat::Complex s{};
            for (std::size_t k = 0; k < source_dim; ++k) {
              s += out[(t1 * source_dim + k) * ref_dim + r1] * std::conj(out[(t2 * source_dim + k) * ref_dim + r2]);
            }
            rho(t1 * ref_dim + r1, t2 * ref_dim + r2) = s;
          }
    rho = (rho + rho.adjoint()) * qmat::Complex(0.5);
    const double n = qmat::negativity(DensityMatrix(std::move(rho), {target_dim, ref_dim}), 1);
    if (trial == 0 || n > result.max_negativity) {
      result.max_negativity = n;
      result.worst_trial = trial;
      result.worst_trial_seed = trial_seed;
    }
  }
  return result;
}

WitnessResult eb_witness(const SimpleCoupling& c, std::size_t trials, std::uint64_t seed) {
  if (c.m.dim() != 2) {
    throw std::invalid_argument("eb_witness: target must be a qubit so that PPT decides separability");
  }
  const ComplexMatrix gen = qmat::kron(c.m.matrix(), c.x.matrix());
  const ComplexMatrix u = qmat::unitary_from_generator(HermitianOp((gen + gen.adjoint()) * qmat::Complex(0.5)));
  return max_output_negativity(u, c.m.dim(), c.x.dim(), trials, seed);
}

}  // namespace harvest::nogo
