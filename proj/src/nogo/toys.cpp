#include <cmath>
#include <numbers>
#include <stdexcept>

#include "harvest/nogo.hpp"

namespace harvest::nogo {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

qmat::Vector ket0() { return {1.0, 0.0}; }
qmat::Vector ket_plus() { return {kInvSqrt2, kInvSqrt2}; }

// (|00> + |11>) / sqrt 2
qmat::Vector bell() { return {kInvSqrt2, 0.0, 0.0, kInvSqrt2}; }

// Places a single-qubit observable on `qubit` of a register of `source_dim / 2` qubits.
HermitianOp on_source_qubit(const HermitianOp& op, std::size_t source_dim, std::size_t qubit) {
  if (source_dim != 2 && source_dim != 4) {
    throw qmat::DimensionError("CNOT toys: source must be one or two qubits, got dimension " +
                               std::to_string(source_dim));
  }
  if (qubit >= source_dim / 2) {
    throw std::out_of_range("CNOT toys: source qubit " + std::to_string(qubit) + " out of range");
  }
  if (source_dim == 2) return op;
  const ComplexMatrix id = ComplexMatrix::identity(2);
  return HermitianOp(qubit == 0 ? qmat::kron(op.matrix(), id) : qmat::kron(id, op.matrix()));
}

// A (x) S (x) B with A, B qubits; `ab` is a two-qubit state on A (x) B.
qmat::Vector interleave(const qmat::Vector& ab, const qmat::Vector& s) {
  const std::size_t ds = s.size();
  qmat::Vector out(4 * ds);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t k = 0; k < ds; ++k) out[(a * ds + k) * 2 + b] = ab[a * 2 + b] * s[k];
  return out;
}

}  // namespace

HermitianOp cnot_control_observable() {
  const double d[] = {2.0 * std::numbers::pi, std::numbers::pi};
  return HermitianOp::diagonal(std::span<const double>(d));
}

HermitianOp cnot_target_observable() {
  // 2|+><+| + 3|-><-| = 2.5 I - 0.5 sigma_x
  ComplexMatrix m(2, 2);
  m(0, 0) = m(1, 1) = 2.5;
  m(0, 1) = m(1, 0) = -0.5;
  return HermitianOp(std::move(m));
}

SimpleCoupling cnot_target_controls(Target t, std::size_t source_dim, std::size_t source_qubit) {
  return {t, cnot_control_observable(), on_source_qubit(cnot_target_observable(), source_dim, source_qubit)};
}

SimpleCoupling cnot_source_controls(Target t, std::size_t source_dim, std::size_t source_qubit) {
  return {t, cnot_target_observable(), on_source_qubit(cnot_control_observable(), source_dim, source_qubit)};
}

// baa_relay: B writes into S, S is copied onto A, A uncomputes S.
// baa_broadcast: S in |+> controls B, then A; A uncomputes S.
// aba_sandwich: S in |+> controls A, B controls S, S controls A again.
// two_qubit_source_swap: the two halves of an entangled source are swapped onto A and B.
std::vector<ToyCircuit> toy_circuits() {
  const SystemDims qubits{2, 2, 2};
  const SystemDims pair{2, 4, 2};
  std::vector<ToyCircuit> toys;

  toys.push_back({"baa_relay",
                  InteractionSequence({cnot_target_controls(Target::B), cnot_source_controls(Target::A),
                                       cnot_target_controls(Target::A)},
                                      qubits),
                  qmat::kron(qmat::kron(ket0(), ket0()), ket_plus()), interleave(bell(), ket0()),
                  std::array<bool, 3>{false, true, false}});

  toys.push_back({"baa_broadcast",
                  InteractionSequence({cnot_source_controls(Target::B), cnot_source_controls(Target::A),
                                       cnot_target_controls(Target::A)},
                                      qubits),
                  qmat::kron(qmat::kron(ket0(), ket_plus()), ket0()), interleave(bell(), ket0()),
                  std::array<bool, 3>{true, false, false}});

  toys.push_back({"aba_sandwich",
                  InteractionSequence({cnot_source_controls(Target::A), cnot_target_controls(Target::B),
                                       cnot_source_controls(Target::A)},
                                      qubits),
                  qmat::kron(qmat::kron(ket0(), ket_plus()), ket_plus()), interleave(bell(), ket_plus()),
                  std::array<bool, 3>{false, false, true}});

  const qmat::Vector s_pair = bell();
  toys.push_back({"two_qubit_source_swap",
                  InteractionSequence({cnot_source_controls(Target::A, 4, 0), cnot_source_controls(Target::B, 4, 1),
                                       cnot_target_controls(Target::A, 4, 0), cnot_target_controls(Target::B, 4, 1)},
                                      pair),
                  interleave(qmat::kron(ket0(), ket0()), s_pair),
                  interleave(bell(), qmat::kron(ket0(), ket0())), std::nullopt});
  return toys;
}

ToyResult run_toy(const ToyCircuit& toy) {
  const auto& dims = toy.sequence.dims();
  if (toy.initial_state.size() != dims.total() || toy.expected_state.size() != dims.total()) {
    throw qmat::DimensionError("run_toy: state vectors do not match the circuit dimensions");
  }
  ComplexMatrix u = ComplexMatrix::identity(dims.total());
  for (const auto& c : toy.sequence.couplings()) u = embed_and_exponentiate(c, dims) * u;
  qmat::Vector final_state = u * std::span<const qmat::Complex>(toy.initial_state);

  qmat::Complex overlap{};
  for (std::size_t i = 0; i < final_state.size(); ++i) overlap += std::conj(toy.expected_state[i]) * final_state[i];

  const auto rho = DensityMatrix::from_pure(final_state, dims.as_list());
  const double n = qmat::negativity(qmat::partial_trace(rho, {0, 2}), 1);
  return {toy.name, std::norm(overlap), n, std::move(final_state)};
}

}  // namespace harvest::nogo
