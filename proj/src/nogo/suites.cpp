#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "harvest/nogo.hpp"
#include "harvest/random.hpp"

namespace harvest::nogo {

namespace {

using qmat::Rng;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

HermitianOp random_observable(std::size_t dim, Rng& rng) {
  return qmat::random_hermitian(dim, rng, uniform(rng, 0.3, 2.5));
}

SimpleCoupling random_coupling(Target t, std::size_t source_dim, Rng& rng) {
  HermitianOp m = random_observable(2, rng);
  HermitianOp x = random_observable(source_dim, rng);
  return {t, std::move(m), std::move(x)};
}

DensityMatrix random_product_state(const SystemDims& dims, Rng& rng) {
  const auto a = qmat::random_state(dims.a, rng);
  const auto s = qmat::random_state(dims.s, rng);
  const auto b = qmat::random_state(dims.b, rng);
  return DensityMatrix::from_pure(qmat::kron(qmat::kron(a, s), b), dims.as_list());
}

HermitianOp symmetrized(const ComplexMatrix& m) { return HermitianOp((m + m.adjoint()) * qmat::Complex(0.5)); }

// V blockdiag(B_1, B_2) V^dagger with a block split after `split` basis vectors.
HermitianOp block_observable(const ComplexMatrix& v, std::size_t split, Rng& rng) {
  const std::size_t d = v.rows();
  const auto top = random_observable(split, rng);
  const auto bottom = random_observable(d - split, rng);
  ComplexMatrix block(d, d);
  for (std::size_t i = 0; i < split; ++i)
    for (std::size_t j = 0; j < split; ++j) block(i, j) = top.matrix()(i, j);
  for (std::size_t i = 0; i < d - split; ++i)
    for (std::size_t j = 0; j < d - split; ++j) block(split + i, split + j) = bottom.matrix()(i, j);
  return symmetrized(v * block * v.adjoint());
}

// V diag(h1 1_split, h2 1_rest) V^dagger: commutes with every block observable.
HermitianOp hub_observable(const ComplexMatrix& v, std::size_t split, Rng& rng) {
  std::vector<double> diag(v.rows());
  const double h1 = uniform(rng, -2.0, 2.0);
  const double h2 = h1 + uniform(rng, 0.3, 2.0);
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = i < split ? h1 : h2;
  return symmetrized(v * ComplexMatrix::diagonal(std::span<const double>(diag)) * v.adjoint());
}

HermitianOp diagonal_observable(const ComplexMatrix& v, Rng& rng) {
  std::vector<double> diag(v.rows());
  for (auto& x : diag) x = uniform(rng, -2.5, 2.5);
  return symmetrized(v * ComplexMatrix::diagonal(std::span<const double>(diag)) * v.adjoint());
}

SuiteResult start(std::string name, std::size_t trials, std::uint64_t seed) {
  SuiteResult r;
  r.suite = std::move(name);
  r.trials = trials;
  r.seed = seed;
  return r;
}

void record(SuiteResult& r, std::size_t trial, std::uint64_t trial_seed, double n, const std::string& desc) {
  if (trial == 0 || n > r.max_negativity) {
    r.max_negativity = n;
    r.worst_trial = trial;
    r.worst_trial_seed = trial_seed;
    r.worst_instance = desc;
  }
}

}  // namespace

SuiteResult verify_eb_channels(std::size_t trials, std::uint64_t seed) {
  SuiteResult r = start("eb", trials, seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t ts = qmat::derive_seed(seed, trial);
    Rng rng(ts);
    const std::size_t ds = 2 + pick(rng, 2);
    const auto c = random_coupling(pick(rng, 2) == 0 ? Target::A : Target::B, ds, rng);
    const auto w = eb_witness(c, 1, ts);
    std::ostringstream os;
    os << "trial " << trial << " seed " << ts << " d_S=" << ds << " target=" << to_string(c.target);
    record(r, trial, ts, w.max_negativity, os.str());
  }
  return r;
}

SuiteResult verify_last_coupling(std::size_t trials, std::uint64_t seed) {
  SuiteResult r = start("last_coupling", trials, seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t ts = qmat::derive_seed(seed, trial);
    Rng rng(ts);
    const SystemDims dims{2, 2 + pick(rng, 3), 2};
    // the target that couples once goes last; the other couples 1..5 times before
    const Target last = pick(rng, 2) == 0 ? Target::B : Target::A;
    const Target first = last == Target::B ? Target::A : Target::B;
    const std::size_t before = 1 + pick(rng, 5);
    std::vector<SimpleCoupling> cs;
    for (std::size_t k = 0; k < before; ++k) cs.push_back(random_coupling(first, dims.s, rng));
    cs.push_back(random_coupling(last, dims.s, rng));
    const InteractionSequence seq(std::move(cs), dims);
    const double n = run_sequence(seq, random_product_state(dims, rng)).negativity;
    std::ostringstream os;
    os << "trial " << trial << " seed " << ts << " pattern=" << seq.pattern() << " d_S=" << dims.s;
    record(r, trial, ts, n, os.str());
  }
  return r;
}

SuiteResult verify_two_commutators(std::size_t trials, std::uint64_t seed) {
  static const char* const kOrders[] = {"BAA", "ABA", "AAB"};
  SuiteResult r = start("commutators", trials, seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t ts = qmat::derive_seed(seed, trial);
    Rng rng(ts);
    const SystemDims dims{2, 2 + pick(rng, 3), 2};
    const ComplexMatrix v = qmat::random_unitary(dims.s, rng);

    // roles: 0 = X_B1, 1 = X_A1, 2 = X_A2
    std::vector<HermitianOp> xs;
    const bool all_commute = pick(rng, 4) == 0;
    const std::size_t hub = pick(rng, 3);
    if (all_commute) {
      for (int k = 0; k < 3; ++k) xs.push_back(diagonal_observable(v, rng));
    } else {
      const std::size_t split = 1 + pick(rng, dims.s - 1);
      for (std::size_t k = 0; k < 3; ++k)
        xs.push_back(k == hub ? hub_observable(v, split, rng) : block_observable(v, split, rng));
    }

    const std::string order = kOrders[pick(rng, 3)];
    std::vector<SimpleCoupling> cs;
    std::size_t next_a = 1;
    for (char c : order) {
      const std::size_t role = c == 'B' ? 0 : next_a++;
      cs.push_back({c == 'B' ? Target::B : Target::A, random_observable(2, rng), xs[role]});
    }
    const InteractionSequence seq(std::move(cs), dims);
    const auto profile = commutator_profile(seq);
    if (profile.vanishing_count() < 2) {
      throw std::logic_error("verify_two_commutators: generated instance has fewer than two vanishing commutators");
    }
    const double n = run_sequence(seq, random_product_state(dims, rng)).negativity;
    std::ostringstream os;
    os << "trial " << trial << " seed " << ts << " order=" << order << " d_S=" << dims.s
       << " vanishing=" << profile.vanishing[0] << profile.vanishing[1] << profile.vanishing[2];
    record(r, trial, ts, n, os.str());
  }
  return r;
}

SuiteResult twoqubit_source_nogo(std::size_t trials, std::uint64_t seed, SourceAccess access, bool zero_generators) {
  static const char* const kOrders[] = {"BAA", "ABA", "AAB"};
  SuiteResult r = start(access == SourceAccess::Split ? "two_qubit_source" : "two_qubit_source_same_qubit", trials, seed);
  const SystemDims dims{2, 4, 2};
  const ComplexMatrix id2 = ComplexMatrix::identity(2);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t ts = qmat::derive_seed(seed, trial);
    Rng rng(ts);
    const auto on_qubit = [&](const HermitianOp& x1, std::size_t q) {
      return symmetrized(q == 0 ? qmat::kron(x1.matrix(), id2) : qmat::kron(id2, x1.matrix()));
    };
    const auto draw_m = [&]() { return zero_generators ? HermitianOp::zero(2) : random_observable(2, rng); };

    const std::size_t qb = pick(rng, 2);
    std::size_t qa1 = 1 - qb, qa2 = qb;
    if (access == SourceAccess::Split && pick(rng, 2) == 1) std::swap(qa1, qa2);
    if (access == SourceAccess::SameQubit) qa1 = qa2 = qb;

    const std::string order = kOrders[pick(rng, 3)];
    std::vector<SimpleCoupling> cs;
    std::size_t next_a = 0;
    for (char c : order) {
      const std::size_t q = c == 'B' ? qb : (next_a++ == 0 ? qa1 : qa2);
      cs.push_back({c == 'B' ? Target::B : Target::A, draw_m(), on_qubit(random_observable(2, rng), q)});
    }
    const InteractionSequence seq(std::move(cs), dims);

    // targets in random pure states, source pair in a random (generically entangled) pure state
    const auto a = qmat::random_state(2, rng);
    const auto s = qmat::random_state(4, rng);
    const auto b = qmat::random_state(2, rng);
    const auto rho0 = DensityMatrix::from_pure(qmat::kron(qmat::kron(a, s), b), dims.as_list());
    const double n = run_sequence(seq, rho0).negativity;
    std::ostringstream os;
    os << "trial " << trial << " seed " << ts << " order=" << order << " qubits(B,A1,A2)=" << qb << qa1 << qa2;
    record(r, trial, ts, n, os.str());
  }
  return r;
}

}  // namespace harvest::nogo
