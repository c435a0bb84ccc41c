#include <stdexcept>

#include "harvest/nogo.hpp"

namespace harvest::nogo {

InteractionSequence::InteractionSequence(std::vector<SimpleCoupling> couplings, SystemDims dims)
    : couplings_(std::move(couplings)), dims_(dims) {
  if (couplings_.empty() || couplings_.size() > kMaxLength) {
    throw std::invalid_argument("InteractionSequence: length must be between 1 and " +
                                std::to_string(kMaxLength) + ", got " + std::to_string(couplings_.size()));
  }
  for (std::size_t i = 0; i < couplings_.size(); ++i) {
    const auto& c = couplings_[i];
    if (c.x.dim() != dims_.s) {
      throw qmat::DimensionError("InteractionSequence: coupling " + std::to_string(i) + " source dimension " +
                                 std::to_string(c.x.dim()) + " != " + std::to_string(dims_.s));
    }
    if (c.m.dim() != dims_.target_dim(c.target)) {
      throw qmat::DimensionError("InteractionSequence: coupling " + std::to_string(i) + " target dimension " +
                                 std::to_string(c.m.dim()) + " != " +
                                 std::to_string(dims_.target_dim(c.target)));
    }
  }
}

std::string InteractionSequence::pattern() const {
  std::string p;
  for (const auto& c : couplings_) p += to_string(c.target);
  return p;
}

SequenceOutcome run_sequence(const InteractionSequence& seq, const DensityMatrix& rho0) {
  const auto& dims = seq.dims();
  if (rho0.subsystem_dims() != dims.as_list()) {
    throw qmat::DimensionError("run_sequence: initial state is not laid out as A (x) S (x) B with dims (" +
                               std::to_string(dims.a) + ", " + std::to_string(dims.s) + ", " +
                               std::to_string(dims.b) + ")");
  }
  ComplexMatrix u = ComplexMatrix::identity(dims.total());
  for (const auto& c : seq.couplings()) u = embed_and_exponentiate(c, dims) * u;
  DensityMatrix final_state = qmat::evolve(rho0, u);
  DensityMatrix ab = qmat::partial_trace(final_state, {0, 2});
  const double n = qmat::negativity(ab, 1);
  return {std::move(ab), n, std::move(final_state)};
}

int CommutatorProfile::vanishing_count() const {
  int n = 0;
  for (bool v : vanishing) n += v ? 1 : 0;
  return n;
}

CommutatorProfile commutator_profile(const InteractionSequence& seq) {
  const auto& cs = seq.couplings();
  if (cs.size() != 3) {
    throw std::invalid_argument("commutator_profile: needs exactly three couplings, got " +
                                std::to_string(cs.size()));
  }
  const SimpleCoupling* b1 = nullptr;
  std::vector<const SimpleCoupling*> a;
  for (const auto& c : cs) {
    if (c.target == Target::B) {
      if (b1 != nullptr) throw std::invalid_argument("commutator_profile: B must couple exactly once");
      b1 = &c;
    } else {
      a.push_back(&c);
    }
  }
  if (b1 == nullptr || a.size() != 2) {
    throw std::invalid_argument("commutator_profile: expected one B and two A couplings, got " + seq.pattern());
  }

  CommutatorProfile p;
  p.norms = {qmat::commutator(b1->x.matrix(), a[0]->x.matrix()).frobenius_norm(),
             qmat::commutator(b1->x.matrix(), a[1]->x.matrix()).frobenius_norm(),
             qmat::commutator(a[0]->x.matrix(), a[1]->x.matrix()).frobenius_norm()};
  for (std::size_t i = 0; i < 3; ++i) p.vanishing[i] = p.norms[i] < CommutatorProfile::kVanishingThreshold;
  return p;
}

}  // namespace harvest::nogo
