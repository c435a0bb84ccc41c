#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "harvest/qmat.hpp"

// Finite-dimensional bench for simple-generated interactions exp(-i m (x) X)
// between targets A, B and a shared source S. Full space ordering is A (x) S (x) B.
namespace harvest::nogo {

using qmat::ComplexMatrix;
using qmat::DensityMatrix;
using qmat::HermitianOp;

enum class Target { A, B };

const char* to_string(Target t);

struct SystemDims {
  std::size_t a = 2;
  std::size_t s = 2;
  std::size_t b = 2;

  std::size_t total() const { return a * s * b; }
  std::vector<std::size_t> as_list() const { return {a, s, b}; }
  std::size_t target_dim(Target t) const { return t == Target::A ? a : b; }
};

// One simple-generated interaction: m acts on the target, x on the source.
struct SimpleCoupling {
  Target target;
  HermitianOp m;
  HermitianOp x;
};

// Couplings applied left to right in time; 1..6 entries.
class InteractionSequence {
 public:
  static constexpr std::size_t kMaxLength = 6;

  InteractionSequence(std::vector<SimpleCoupling> couplings, SystemDims dims);

  const std::vector<SimpleCoupling>& couplings() const { return couplings_; }
  const SystemDims& dims() const { return dims_; }
  // "BAA", "ABA", ...
  std::string pattern() const;

 private:
  std::vector<SimpleCoupling> couplings_;
  SystemDims dims_;
};

//------------------------------------------------------------------------------
// Single coupling
//------------------------------------------------------------------------------

// exp(-i m (x) X) on the full A (x) S (x) B space, identity on the other target.
ComplexMatrix embed_and_exponentiate(const SimpleCoupling& c, const SystemDims& dims);

struct ControlledBranch {
  double eigenvalue;              // x_k
  ComplexMatrix projector;        // onto the x_k eigenspace of X
  ComplexMatrix local_unitary;    // exp(-i x_k m)
};

// Eigenvalues of X closer than this are merged into one branch.
inline constexpr double kBranchMergeTolerance = 1e-10;

// exp(-i m (x) X) = sum_k exp(-i x_k m) (x) P_k over the distinct spectrum of X.
std::vector<ControlledBranch> controlled_decomposition(const SimpleCoupling& c);

// Reassembles the controlled form on the full space, for comparison with
// embed_and_exponentiate.
ComplexMatrix assemble_controlled(const std::vector<ControlledBranch>& branches, Target target,
                                  const SystemDims& dims);

// Target state after one coupling with the source, from the measure-and-prepare form
// sum_k <P_k rho_S> e^{-i x_k m} rho_0 e^{i x_k m}.
DensityMatrix channel_output(const SimpleCoupling& c, const DensityMatrix& rho_target0,
                             const DensityMatrix& rho_source);

// Same map by full unitary evolution of target (x) source and a partial trace.
DensityMatrix channel_output_unitary(const SimpleCoupling& c, const DensityMatrix& rho_target0,
                                     const DensityMatrix& rho_source);

//------------------------------------------------------------------------------
// Entanglement-breaking witness
//------------------------------------------------------------------------------

struct WitnessResult {
  double max_negativity = 0.0;
  std::size_t worst_trial = 0;
  std::uint64_t worst_trial_seed = 0;
};

// Reference dimensions above this make PPT inconclusive on 2 x d_ref outputs.
inline constexpr std::size_t kMaxReferenceDim = 3;

// Each trial draws a random pure state on source (x) reference (d_ref in {2, 3})
// and a random pure target state, applies `target_source_unitary` on
// target (x) source and reports the target/reference negativity.
WitnessResult max_output_negativity(const ComplexMatrix& target_source_unitary, std::size_t target_dim,
                                    std::size_t source_dim, std::size_t trials, std::uint64_t seed);

// The witness for a single simple coupling. Requires a qubit target.
WitnessResult eb_witness(const SimpleCoupling& c, std::size_t trials, std::uint64_t seed);

//------------------------------------------------------------------------------
// Sequences
//------------------------------------------------------------------------------

struct SequenceOutcome {
  DensityMatrix rho_ab;
  double negativity;
  DensityMatrix rho_final;  // full A (x) S (x) B state
};

SequenceOutcome run_sequence(const InteractionSequence& seq, const DensityMatrix& rho0);

// Three-coupling sequences only: norms of [X_B1, X_A1], [X_B1, X_A2], [X_A1, X_A2].
struct CommutatorProfile {
  static constexpr double kVanishingThreshold = 1e-10;

  std::array<double, 3> norms{};
  std::array<bool, 3> vanishing{};

  int vanishing_count() const;
};

CommutatorProfile commutator_profile(const InteractionSequence& seq);

//------------------------------------------------------------------------------
// Randomized no-go suites
//------------------------------------------------------------------------------

struct SuiteResult {
  std::string suite;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double max_negativity = 0.0;
  std::size_t worst_trial = 0;
  std::uint64_t worst_trial_seed = 0;
  std::string worst_instance;  // human-readable replay description
};

// Random simple couplings with d_S in {2,3}; eb_witness on each.
SuiteResult verify_eb_channels(std::size_t trials, std::uint64_t seed);

// Random sequences of A couplings followed by one final B coupling, d_S in {2,3,4}.
SuiteResult verify_last_coupling(std::size_t trials, std::uint64_t seed);

// Random three-coupling sequences with at least two vanishing source commutators,
// every interaction order, d_S in {2,3,4}.
SuiteResult verify_two_commutators(std::size_t trials, std::uint64_t seed);

enum class SourceAccess {
  Split,      // B on one source qubit, A once on each qubit
  SameQubit,  // all three couplings on the same source qubit
};

// Source = two qubits in a random entangled state. Returns the max AB negativity.
SuiteResult twoqubit_source_nogo(std::size_t trials, std::uint64_t seed, SourceAccess access = SourceAccess::Split,
                                 bool zero_generators = false);

//------------------------------------------------------------------------------
// CNOT toy circuits
//------------------------------------------------------------------------------

// CNOT as a simple-generated coupling: pi (2|0><0| + |1><1|) on the control,
// (2|+><+| + 3|-><-|) on the target qubit.
HermitianOp cnot_control_observable();
HermitianOp cnot_target_observable();

// Target qubit controls a CNOT onto a source qubit (X = target observable on S).
SimpleCoupling cnot_target_controls(Target t, std::size_t source_dim = 2, std::size_t source_qubit = 0);
// A source qubit controls a CNOT onto the target.
SimpleCoupling cnot_source_controls(Target t, std::size_t source_dim = 2, std::size_t source_qubit = 0);

struct ToyCircuit {
  std::string name;
  InteractionSequence sequence;
  qmat::Vector initial_state;   // A (x) S (x) B
  qmat::Vector expected_state;  // A (x) S (x) B
  // commutators [U_B1,U_A1], [U_B1,U_A2], [U_A1,U_A2] expected to vanish (3-gate circuits only)
  std::optional<std::array<bool, 3>> expected_vanishing;
};

struct ToyResult {
  std::string name;
  double fidelity;
  double negativity;
  qmat::Vector final_state;
};

std::vector<ToyCircuit> toy_circuits();
ToyResult run_toy(const ToyCircuit& toy);

}  // namespace harvest::nogo
