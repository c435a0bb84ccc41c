#include <cmath>
#include <stdexcept>

#include "harvest/nogo.hpp"

namespace harvest::nogo {

const char* to_string(Target t) { return t == Target::A ? "A" : "B"; }

namespace {

void check_coupling_dims(const SimpleCoupling& c, const SystemDims& dims) {
  if (c.m.dim() != dims.target_dim(c.target)) {
    throw qmat::DimensionError(std::string("coupling on ") + to_string(c.target) + ": m has dimension " +
                               std::to_string(c.m.dim()) + ", target has " +
                               std::to_string(dims.target_dim(c.target)));
  }
  if (c.x.dim() != dims.s) {
    throw qmat::DimensionError("coupling: X has dimension " + std::to_string(c.x.dim()) + ", source has " +
                               std::to_string(dims.s));
  }
}

// exp(-i m (x) X) on the target (x) source or source (x) target pair.
ComplexMatrix local_exponential(const SimpleCoupling& c, bool target_first) {
  const ComplexMatrix gen = target_first ? qmat::kron(c.m.matrix(), c.x.matrix())
                                         : qmat::kron(c.x.matrix(), c.m.matrix());
  // kron of two Hermitian matrices is Hermitian up to rounding of the products
  return qmat::unitary_from_generator(HermitianOp((gen + gen.adjoint()) * qmat::Complex(0.5)));
}

}  // namespace

ComplexMatrix embed_and_exponentiate(const SimpleCoupling& c, const SystemDims& dims) {
  check_coupling_dims(c, dims);
  if (c.target == Target::A) {
    return qmat::kron(local_exponential(c, true), ComplexMatrix::identity(dims.b));
  }
  return qmat::kron(ComplexMatrix::identity(dims.a), local_exponential(c, false));
}

std::vector<ControlledBranch> controlled_decomposition(const SimpleCoupling& c) {
  const auto [values, vectors] = qmat::herm_eig(c.x);
  const std::size_t n = values.size();
  std::vector<ControlledBranch> branches;

  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && values[end] - values[end - 1] < kBranchMergeTolerance) ++end;

    ComplexMatrix projector(n, n);
    double mean = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      mean += values[k];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) projector(i, j) += vectors(i, k) * std::conj(vectors(j, k));
    }
    mean /= static_cast<double>(end - start);

    ComplexMatrix local = qmat::unitary_from_generator(HermitianOp(c.m.matrix() * qmat::Complex(mean)));
    branches.push_back({mean, std::move(projector), std::move(local)});
    start = end;
  }
  return branches;
}

ComplexMatrix assemble_controlled(const std::vector<ControlledBranch>& branches, Target target,
                                  const SystemDims& dims) {
  ComplexMatrix u(dims.total(), dims.total());
  for (const auto& br : branches) {
    if (target == Target::A) {
      u += qmat::kron(qmat::kron(br.local_unitary, br.projector), ComplexMatrix::identity(dims.b));
    } else {
      u += qmat::kron(ComplexMatrix::identity(dims.a), qmat::kron(br.projector, br.local_unitary));
    }
  }
  return u;
}

DensityMatrix channel_output(const SimpleCoupling& c, const DensityMatrix& rho_target0,
                             const DensityMatrix& rho_source) {
  if (rho_target0.dim() != c.m.dim() || rho_source.dim() != c.x.dim()) {
    throw qmat::DimensionError("channel_output: state dimensions do not match the coupling");
  }
  ComplexMatrix out(rho_target0.dim(), rho_target0.dim());
  for (const auto& br : controlled_decomposition(c)) {
    const double p = (br.projector * rho_source.matrix()).trace().real();
    out += br.local_unitary * rho_target0.matrix() * br.local_unitary.adjoint() * qmat::Complex(p);
  }
  out = (out + out.adjoint()) * qmat::Complex(0.5);
  return DensityMatrix(std::move(out), rho_target0.subsystem_dims());
}

DensityMatrix channel_output_unitary(const SimpleCoupling& c, const DensityMatrix& rho_target0,
                                     const DensityMatrix& rho_source) {
  if (rho_target0.dim() != c.m.dim() || rho_source.dim() != c.x.dim()) {
    throw qmat::DimensionError("channel_output_unitary: state dimensions do not match the coupling");
  }
  const DensityMatrix joint(qmat::kron(rho_target0.matrix(), rho_source.matrix()),
                           {rho_target0.dim(), rho_source.dim()});
  return qmat::partial_trace(qmat::evolve(joint, local_exponential(c, true)), {0});
}

}  // namespace harvest::nogo
