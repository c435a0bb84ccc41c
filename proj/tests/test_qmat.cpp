#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "harvest/qmat.hpp"
#include "harvest/random.hpp"

using namespace harvest::qmat;
using Catch::Approx;

namespace {

const Complex I1{0.0, 1.0};

ComplexMatrix pauli_x() { return {{0, 1}, {1, 0}}; }
ComplexMatrix pauli_z() { return {{1, 0}, {0, -1}}; }

Vector basis(std::size_t dim, std::size_t k) {
  Vector v(dim);
  v[k] = 1.0;
  return v;
}

Vector bell_phi_plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, 0, 0, s};
}

// Roots of the characteristic polynomial of a 3x3 Hermitian matrix by the
// trigonometric form of Cardano's formula. Independent of any eigensolver.
std::vector<double> cubic_eigenvalues(const ComplexMatrix& m) {
  const double a = m(0, 0).real(), b = m(1, 1).real(), c = m(2, 2).real();
  const Complex d = m(0, 1), e = m(1, 2), f = m(0, 2);
  // det(m - x) = -x^3 + p2 x^2 - p1 x + p0
  const double p2 = a + b + c;
  const double p1 = a * b + b * c + a * c - std::norm(d) - std::norm(e) - std::norm(f);
  const double p0 = a * b * c + 2.0 * (d * e * std::conj(f)).real() - a * std::norm(e) - b * std::norm(f) -
                    c * std::norm(d);
  const double shift = p2 / 3.0;
  const double p = p1 - p2 * p2 / 3.0;                                  // depressed: y^3 + p y + q = 0
  const double q = -(2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0);  // sign from -x^3 convention
  std::vector<double> roots;
  if (std::abs(p) < 1e-300) {
    roots = {shift, shift, shift};
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(shift + r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

TEST_CASE("kron of small matrices", "[qmat][kron]") {
  CHECK((kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) - ComplexMatrix::identity(4)).max_abs() == 0.0);

  const std::vector<double> d12{1, 2}, d34{3, 4}, expected{3, 4, 6, 8};
  const auto k = kron(ComplexMatrix::diagonal(std::span<const double>(d12)),
                      ComplexMatrix::diagonal(std::span<const double>(d34)));
  CHECK((k - ComplexMatrix::diagonal(std::span<const double>(expected))).max_abs() == 0.0);

  // (sigma_x (x) sigma_x)|00> = |11>
  const Vector out = kron(pauli_x(), pauli_x()) * std::span<const Complex>(basis(4, 0));
  CHECK(phase_aligned_distance(out, basis(4, 3)) == 0.0);
  CHECK(std::abs(out[3] - 1.0) == 0.0);
}

TEST_CASE("kron rejects products beyond the dimension cap", "[qmat][kron][errors]") {
  const std::size_t old_cap = dimension_cap();
  set_dimension_cap(16);
  CHECK_THROWS_AS(kron(ComplexMatrix::identity(4), ComplexMatrix::identity(8)), DimensionError);
  CHECK_NOTHROW(kron(ComplexMatrix::identity(4), ComplexMatrix::identity(4)));
  CHECK_THROWS_AS(ComplexMatrix::identity(17), DimensionError);
  set_dimension_cap(old_cap);
  CHECK_THROWS_AS(kron(ComplexMatrix::identity(64), ComplexMatrix::identity(128)), DimensionError);
}

TEST_CASE("HermitianOp enforces Hermiticity", "[qmat][errors]") {
  CHECK_THROWS_AS(HermitianOp(ComplexMatrix{{0, 1}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(HermitianOp(ComplexMatrix(2, 3)), std::invalid_argument);
  CHECK_NOTHROW(HermitianOp(ComplexMatrix{{1, I1}, {-I1, 2}}));
}

TEST_CASE("herm_eig on Pauli matrices", "[qmat][eig]") {
  const auto z = herm_eig(HermitianOp(pauli_z()));
  CHECK(z.values[0] == Approx(-1.0).margin(1e-15));
  CHECK(z.values[1] == Approx(1.0).margin(1e-15));

  const auto x = herm_eig(HermitianOp(pauli_x()));
  CHECK(x.values[0] == Approx(-1.0).margin(1e-15));
  CHECK(x.values[1] == Approx(1.0).margin(1e-15));
  const double s = 1.0 / std::sqrt(2.0);
  const Vector minus{s, -s}, plus{s, s};
  const Vector v0{x.vectors(0, 0), x.vectors(1, 0)}, v1{x.vectors(0, 1), x.vectors(1, 1)};
  CHECK(phase_aligned_distance(v0, minus) < 1e-14);
  CHECK(phase_aligned_distance(v1, plus) < 1e-14);
}

TEST_CASE("herm_eig reconstruction on random Hermitian matrices", "[qmat][eig][property]") {
  Rng rng(20240611);
  for (std::size_t dim : {1u, 2u, 3u, 5u, 8u, 16u}) {
    for (int trial = 0; trial < 25; ++trial) {
      const auto h = random_hermitian(dim, rng);
      const auto [values, v] = herm_eig(h);
      REQUIRE(std::is_sorted(values.begin(), values.end()));
      const double scale = std::max(1.0, h.matrix().max_abs());
      const ComplexMatrix hv = h.matrix() * v;
      const ComplexMatrix vd = v * ComplexMatrix::diagonal(std::span<const double>(values));
      CHECK((hv - vd).max_abs() <= 1e-10 * scale);
      CHECK((v.adjoint() * v - ComplexMatrix::identity(dim)).max_abs() <= 1e-10);
    }
  }
}

TEST_CASE("herm_eig matches characteristic polynomial roots", "[qmat][eig]") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    // 2x2: lambda = (a+d)/2 -+ sqrt(((a-d)/2)^2 + |b|^2)
    const auto h2 = random_hermitian(2, rng);
    const double a = h2.matrix()(0, 0).real(), d = h2.matrix()(1, 1).real();
    const double rad = std::sqrt(std::pow((a - d) / 2.0, 2) + std::norm(h2.matrix()(0, 1)));
    const auto ev2 = herm_eig(h2).values;
    CHECK(std::abs(ev2[0] - ((a + d) / 2.0 - rad)) < 1e-12);
    CHECK(std::abs(ev2[1] - ((a + d) / 2.0 + rad)) < 1e-12);

    const auto h3 = random_hermitian(3, rng);
    const auto roots = cubic_eigenvalues(h3.matrix());
    const auto ev3 = herm_eig(h3).values;
    for (int k = 0; k < 3; ++k) CHECK(std::abs(ev3[k] - roots[k]) < 1e-12);
  }
  // Degenerate analytic case: diag(2,2,-1) rotated stays (−1, 2, 2).
  const std::vector<double> diag{2, 2, -1};
  Rng r2(3);
  const auto u = random_unitary(3, r2);
  const ComplexMatrix rotated = u * ComplexMatrix::diagonal(std::span<const double>(diag)) * u.adjoint();
  const ComplexMatrix sym = (rotated + rotated.adjoint()) * Complex(0.5);
  const auto ev = herm_eig(HermitianOp(sym)).values;
  CHECK(std::abs(ev[0] + 1.0) < 1e-12);
  CHECK(std::abs(ev[1] - 2.0) < 1e-12);
  CHECK(std::abs(ev[2] - 2.0) < 1e-12);
}

TEST_CASE("unitary_from_generator", "[qmat][unitary]") {
  CHECK((unitary_from_generator(HermitianOp::zero(3)) - ComplexMatrix::identity(3)).max_abs() < 1e-15);

  // exp(-i pi sigma_x / 2) = -i sigma_x
  const auto u = unitary_from_generator(HermitianOp(pauli_x() * Complex(std::numbers::pi / 2.0)));
  CHECK((u - pauli_x() * (-I1)).max_abs() < 1e-14);

  // pi (2|0><0| + |1><1|) (x) (2|+><+| + 3|-><-|) generates CNOT with the first factor as control.
  const double s = 1.0 / std::sqrt(2.0);
  const Vector plus{s, s}, minus{s, -s};
  const ComplexMatrix control{{2, 0}, {0, 1}};
  const ComplexMatrix target = ComplexMatrix::outer(plus, plus) * Complex(2.0) + ComplexMatrix::outer(minus, minus) * Complex(3.0);
  ComplexMatrix gen = kron(control, target) * Complex(std::numbers::pi);
  gen = (gen + gen.adjoint()) * Complex(0.5);
  const ComplexMatrix cnot{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
  const auto ucnot = unitary_from_generator(HermitianOp(gen));
  CHECK(phase_aligned_distance(ucnot, cnot) < 1e-10);
}

TEST_CASE("unitary_from_generator is unitary for random generators", "[qmat][unitary][property]") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + trial % 8;
    const auto u = unitary_from_generator(random_hermitian(dim, rng, 3.0));
    CHECK((u * u.adjoint() - ComplexMatrix::identity(dim)).max_abs() <= 1e-10);
  }
}

TEST_CASE("DensityMatrix validation", "[qmat][errors]") {
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::identity(2), {2}), std::invalid_argument);  // trace 2
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix{{1.5, 0}, {0, -0.5}}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix{{1, 0}, {0, 0}}, {3}), std::invalid_argument);
  // Tiny negative eigenvalues from rounding are accepted.
  CHECK_NOTHROW(DensityMatrix(ComplexMatrix{{1.0 + 5e-11, 0}, {0, -5e-11}}, {2}));
}

TEST_CASE("partial_trace", "[qmat][trace]") {
  Rng rng(5);
  const auto ra = random_density({2}, rng);
  const auto rs = random_density({3}, rng);
  const auto kept = partial_trace(tensor(ra, rs), {0});
  CHECK((kept.matrix() - ra.matrix()).max_abs() < 1e-15);
  CHECK(kept.subsystem_dims() == std::vector<std::size_t>{2});

  const auto bell = DensityMatrix::from_pure(bell_phi_plus(), {2, 2});
  const auto marginal = partial_trace(bell, {0});
  CHECK((marginal.matrix() - ComplexMatrix::identity(2) * Complex(0.5)).max_abs() < 1e-15);

  CHECK_THROWS_AS(partial_trace(bell, {2}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(bell, std::span<const std::size_t>{}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(bell, {0, 0}), std::invalid_argument);
}

TEST_CASE("partial_trace preserves trace on random multipartite states", "[qmat][trace][property]") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<std::size_t> dims{2, 1 + static_cast<std::size_t>(trial % 3) + 1, 2};
    const auto rho = random_density(dims, rng, 1 + trial % 4);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto r = partial_trace(rho, {k});
      CHECK(std::abs(r.matrix().trace() - 1.0) <= 1e-12);
    }
    const auto pair = partial_trace(rho, {0, 2});
    CHECK(std::abs(pair.matrix().trace() - 1.0) <= 1e-12);
    CHECK(pair.subsystem_dims() == std::vector<std::size_t>{2, 2});
  }
}

TEST_CASE("partial_transpose", "[qmat][pt]") {
  const auto bell = DensityMatrix::from_pure(bell_phi_plus(), {2, 2});
  const auto pt = partial_transpose(bell, 1);
  const auto ev = eigvalsh(pt);
  CHECK(ev[0] == Approx(-0.5).margin(1e-14));
  for (int k = 1; k < 4; ++k) CHECK(ev[k] == Approx(0.5).margin(1e-14));

  Rng rng(13);
  const auto a = random_density({2}, rng), b = random_density({3}, rng);
  const auto prod = tensor(a, b);
  const auto pt_b = partial_transpose(prod, 1);
  CHECK((pt_b - kron(a.matrix(), b.matrix().transpose())).max_abs() < 1e-15);

  CHECK_THROWS_AS(partial_transpose(bell, 2), std::invalid_argument);
}

TEST_CASE("partial_transpose is a Hermiticity-preserving involution", "[qmat][pt][property]") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<std::size_t> dims{2, 2 + static_cast<std::size_t>(trial % 3)};
    const auto rho = random_density(dims, rng, 1 + trial % 3);
    for (std::size_t k = 0; k < 2; ++k) {
      const auto pt = partial_transpose(rho, k);
      CHECK((pt - pt.adjoint()).max_abs() <= 1e-15);
      CHECK((partial_transpose(pt, dims, k) - rho.matrix()).max_abs() == 0.0);
    }
  }
}

TEST_CASE("negativity reference values", "[qmat][negativity]") {
  CHECK(negativity(DensityMatrix::from_pure(bell_phi_plus(), {2, 2}), 1) == Approx(0.5).margin(1e-14));
  CHECK(negativity(DensityMatrix::from_pure(bell_phi_plus(), {2, 2}), 0) == Approx(0.5).margin(1e-14));
  CHECK(negativity(DensityMatrix::maximally_mixed({2, 2}), 1) == 0.0);

  // 1/sqrt2 (|00> + |11>)_AB (x) |0>_S in A (x) S (x) B ordering, traced to AB.
  Vector psi(8);
  psi[0b000] = 1.0 / std::sqrt(2.0);
  psi[0b101] = 1.0 / std::sqrt(2.0);
  const auto ab = partial_trace(DensityMatrix::from_pure(psi, {2, 2, 2}), {0, 2});
  CHECK(negativity(ab, 1) == Approx(0.5).margin(1e-14));
}

TEST_CASE("separable mixtures have zero negativity", "[qmat][negativity][property]") {
  Rng rng(23);
  for (std::size_t db : {2u, 3u}) {
    for (int trial = 0; trial < 200; ++trial) {
      const int terms = 1 + trial % 6;
      ComplexMatrix mix(2 * db, 2 * db);
      std::uniform_real_distribution<double> w(0.0, 1.0);
      double total = 0.0;
      for (int t = 0; t < terms; ++t) {
        const double wt = w(rng);
        total += wt;
        mix += kron(random_density({2}, rng, 1).matrix(), random_density({db}, rng).matrix()) * Complex(wt);
      }
      mix *= Complex(1.0 / total);
      mix = (mix + mix.adjoint()) * Complex(0.5);
      const DensityMatrix rho(mix, {2, db});
      CHECK(negativity(rho, 1) <= 1e-10);
      CHECK(eigvalsh(partial_transpose(rho, 0)).front() >= -1e-12);
    }
  }
}

TEST_CASE("phase-aligned comparison ignores a global phase", "[qmat]") {
  const ComplexMatrix a{{0, 1}, {1, 0}};
  CHECK(phase_aligned_distance(a * std::polar(1.0, 0.7), a) < 1e-15);
  CHECK(phase_aligned_distance(a, pauli_z()) > 0.5);
}
