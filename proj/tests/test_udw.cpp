#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "harvest/qmat.hpp"
#include "harvest/random.hpp"
#include "harvest/udw.hpp"

using namespace harvest::udw;
using Catch::Approx;
using harvest::qmat::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

DeltaSchedule baa(double t_b1, double t_a1, double t_a2, double lambda, double omega_a, double omega_b = 0.0) {
  const double t[] = {t_b1, t_a1, t_a2};
  return DeltaSchedule::from_pattern("BAA", t, lambda, omega_a, omega_b);
}

DeltaSchedule aab(double t_a1, double t_a2, double t_b1, double lambda, double omega_a, double omega_b = 0.0) {
  const double t[] = {t_a1, t_a2, t_b1};
  return DeltaSchedule::from_pattern("AAB", t, lambda, omega_a, omega_b);
}

// Random pattern with 3 or 4 events, times in [0, 3) with gaps of at least 0.05.
DeltaSchedule random_schedule(Rng& rng, double lambda_max) {
  const auto patterns = supported_patterns();
  std::string_view pattern = patterns[rng() % patterns.size()];
  std::vector<double> t(pattern.size());
  double now = uniform(rng, 0.0, 0.5);
  for (auto& x : t) {
    x = now;
    now += uniform(rng, 0.05, 1.2);
  }
  return DeltaSchedule::from_pattern(pattern, t, uniform(rng, 0.0, lambda_max), uniform(rng, -10.0, 10.0),
                                     uniform(rng, -10.0, 10.0));
}

XState random_xstate(Rng& rng) {
  // two PSD 2x2 blocks with random weights
  XState x;
  const auto block = [&](double& p, double& q, Complex& c) {
    p = uniform(rng, 0.0, 1.0);
    q = uniform(rng, 0.0, 1.0);
    c = std::polar(uniform(rng, 0.0, 1.0) * std::sqrt(p * q), uniform(rng, -kPi, kPi));
  };
  block(x.r11, x.r44, x.r14);
  block(x.r22, x.r33, x.r23);
  const double tr = x.trace();
  x.r11 /= tr;
  x.r22 /= tr;
  x.r33 /= tr;
  x.r44 /= tr;
  x.r14 /= tr;
  x.r23 /= tr;
  return x;
}

std::string labels_of(const CoefficientTerm& t) {
  std::string s;
  for (Branch b : t.labels) s += b == Branch::Sinh ? 's' : 'c';
  return s;
}

}  // namespace

//------------------------------------------------------------------------------
// Correlation integrals and angles
//------------------------------------------------------------------------------

TEST_CASE("i_s: support, parity and zero", "[udw][special]") {
  CHECK(i_s(0.0) == 0.0);
  CHECK(i_s(3.0) == 0.0);
  CHECK(i_s(2.0) == 0.0);
  CHECK(i_s(-2.5) == 0.0);
  CHECK(i_s(1.0) > 0.0);
  for (double x = 0.05; x < 2.5; x += 0.1) CHECK(i_s(-x) == -i_s(x));
}

TEST_CASE("i_c: exact values and parity", "[udw][special]") {
  CHECK(i_c(0.0) == 0.25);
  CHECK(i_c(2.0) == (5.0 - 8.0 * std::log(2.0)) / 12.0);
  CHECK(i_c(-2.0) == i_c(2.0));
  for (double x = 0.05; x < 30.0; x *= 1.3) CHECK(i_c(-x) == i_c(x));
  // continuous through the special points and the switch to the large-x expansion
  CHECK(i_c(1e-9) == Approx(0.25).margin(1e-12));
  CHECK(i_c(2.0 + 1e-9) == Approx(i_c(2.0)).margin(1e-7));
  CHECK(i_c(20.0 - 1e-12) == Approx(i_c(20.0)).margin(1e-14));
  // leading large-x behaviour -1/(9 x^2)
  CHECK(i_c(1e3) * 9e6 == Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("theta: scale, support and antisymmetry", "[udw][special]") {
  CHECK(theta(0.0, 0.7) == 0.0);
  CHECK(theta(2.5, 0.1) == 0.0);
  CHECK(theta(1.0, 0.1) == Approx(9.0 * 0.01 / (4.0 * kPi * kPi) * i_s(1.0)).epsilon(1e-15));
  CHECK(theta(-0.6, 0.3) == -theta(0.6, 0.3));
}

TEST_CASE("vacuum_overlap: trivial cases and single-coupling norm", "[udw][special]") {
  const std::array<double, 4> t = {0.0, 0.4, 1.1, 2.3};
  CHECK(vacuum_overlap({0, 0, 0, 0}, t, 0.8) == 1.0);
  CHECK(vacuum_overlap({2, -2, 2, 0}, t, 0.0) == 1.0);
  for (double lambda : {0.1, 0.5, 1.0}) {
    CHECK(vacuum_overlap({2, 0, 0, 0}, t, lambda) ==
          Approx(std::exp(-9.0 * lambda * lambda / (16.0 * kPi * kPi))).epsilon(1e-14));
  }
  // coincident opposite displacements cancel
  const std::array<double, 4> same = {0.5, 0.5, 1.0, 1.5};
  CHECK(vacuum_overlap({2, -2, 0, 0}, same, 0.9) == Approx(1.0).epsilon(1e-14));
}

//------------------------------------------------------------------------------
// Sign patterns, K and h
//------------------------------------------------------------------------------

TEST_CASE("SignPattern: parsing and validation", "[udw]") {
  const auto p = SignPattern::parse("++--+-+-");
  CHECK(p[0] == 1);
  CHECK(p[2] == -1);
  CHECK(p.minus_count() == 4);
  CHECK(p.to_string() == "++--+-+-");
  CHECK(SignPattern({1, 1, -1, -1, 1, -1, 1, -1}) == p);
  CHECK_THROWS_AS(SignPattern::parse("++--"), std::invalid_argument);
  CHECK_THROWS_AS(SignPattern::parse("++--+x+-"), std::invalid_argument);
  CHECK_THROWS_AS(SignPattern({1, 1, 0, 1, 1, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(SignPattern::from_mask(256), std::invalid_argument);
}

TEST_CASE("k_function: all-plus and zero coupling", "[udw]") {
  const CouplingContext ctx{{0.0, 0.3, 0.9, 1.4}, 0.6};
  const Complex k = k_function(SignPattern(), ctx);
  CHECK(k.imag() == 0.0);
  CHECK(k.real() == Approx(vacuum_overlap({2, 2, 2, 2}, ctx.times, ctx.lambda)).epsilon(1e-15));

  const CouplingContext free{{0.0, 0.3, 0.9, 1.4}, 0.0};
  for (unsigned m = 0; m < SignPattern::kCount; ++m) CHECK(k_function(SignPattern::from_mask(m), free) == Complex(1.0));
}

TEST_CASE("k_function: invariant under a global sign flip", "[udw]") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const CouplingContext ctx{{0.0, uniform(rng, 0, 1), uniform(rng, 1, 2), uniform(rng, 2, 3)}, uniform(rng, 0, 2)};
    for (unsigned m = 0; m < SignPattern::kCount; ++m) {
      CHECK(std::abs(k_function(SignPattern::from_mask(m), ctx) - k_function(SignPattern::from_mask(255u ^ m), ctx)) <
            1e-15);
    }
  }
}

TEST_CASE("h_function: vacuum, parity and table equivalence", "[udw]") {
  const CouplingContext free{{0.0, 0.5, 0.5, 1.0}, 0.0};
  CHECK(std::abs(h_function(SignPattern(), free) - 1.0) < 1e-15);

  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const CouplingContext ctx{{0.0, uniform(rng, 0, 1), uniform(rng, 1, 2), uniform(rng, 2, 3)}, uniform(rng, 0, 2)};
    const HTable table(ctx);
    for (unsigned m = 0; m < SignPattern::kCount; ++m) {
      const auto l = SignPattern::from_mask(m);
      const Complex direct = h_function(l, ctx);
      if (l.minus_count() % 2 == 1) {
        CHECK(std::abs(direct) < 1e-14);
        CHECK(table(l) == Complex{});
      } else {
        CHECK(std::abs(direct - table(l)) < 1e-14);
      }
    }
  }
}

TEST_CASE("h_function: literal f convention differs from the hyperbolic expansion", "[udw]") {
  const CouplingContext ctx{{0.0, 0.0, 0.5, 1.0}, 0.1};
  const auto l = SignPattern::parse("++--++--");
  CHECK(h_function(l, ctx, FConvention::Literal) == Complex{});
  CHECK(std::abs(h_function(l, ctx)) > 1e-10);
}

//------------------------------------------------------------------------------
// Schedules
//------------------------------------------------------------------------------

TEST_CASE("DeltaSchedule: patterns and slot normalization", "[udw][schedule]") {
  const auto s = baa(0.0, 0.5, 1.0, 0.1, 3.0);
  CHECK(s.pattern() == "BAA");
  CHECK(s.coupling_count(Detector::B) == 1);
  const auto slots = s.slots();
  CHECK(slots[0].detector == Detector::B);
  CHECK(slots[1].detector == Detector::B);
  CHECK(slots[1].time == 0.0);
  CHECK(slots[2].time == 0.5);
  CHECK(slots[3].time == 1.0);

  const double t4[] = {0.0, 0.4, 1.0, 1.7};
  for (std::string_view p : {"aabb", "ABBA", "ABAB", "BAAB", "BABA", "BBAA"}) {
    CHECK(DeltaSchedule::from_pattern(p, t4, 0.1, 1.0, 1.0).pattern().size() == 4);
  }
  const double t2[] = {0.0, 1.0};
  CHECK(DeltaSchedule::from_pattern("BA", t2, 0.1, 1.0, 1.0).slots()[3].detector == Detector::A);
}

TEST_CASE("DeltaSchedule: validation", "[udw][schedule]") {
  const double t3[] = {0.0, 0.5, 1.0};
  const double t4[] = {0.0, 0.5, 1.0, 1.5};
  CHECK_THROWS_AS(DeltaSchedule::from_pattern("AAA", t3, 0.1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(DeltaSchedule::from_pattern("AAAB", t4, 0.1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(DeltaSchedule::from_pattern("BAA", t4, 0.1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(DeltaSchedule::from_pattern("BAC", t3, 0.1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(DeltaSchedule::from_pattern("BAA", t3, -0.1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(DeltaSchedule::from_pattern("BAA", t3, 0.1, std::nan(""), 1), std::invalid_argument);
  const double unordered[] = {0.0, 1.0, 0.5};
  CHECK_THROWS_AS(DeltaSchedule::from_pattern("BAA", unordered, 0.1, 1, 1), std::invalid_argument);
  // an A and a B coupling at the same instant have no defined order
  const double tie[] = {0.5, 0.5, 1.0};
  CHECK_THROWS_AS(DeltaSchedule::from_pattern("BAA", tie, 0.1, 1, 1), std::invalid_argument);
  // coincident couplings of one detector are fine
  const double own_tie[] = {0.0, 0.5, 0.5};
  CHECK_NOTHROW(DeltaSchedule::from_pattern("BAA", own_tie, 0.1, 1, 1));
  CHECK_THROWS_AS(DeltaSchedule({{Detector::A, 0.0, 2}, {Detector::B, 1.0, 1}}, 0.1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(DeltaSchedule({{Detector::A, 1.0, 1}, {Detector::A, 0.0, 2}, {Detector::B, 2.0, 1}}, 0.1, 1, 1),
                  std::invalid_argument);
}

//------------------------------------------------------------------------------
// Evolved coefficients and the rho_11 structure
//------------------------------------------------------------------------------

TEST_CASE("evolved_coefficients: zero coupling leaves the ground state", "[udw][rho]") {
  const auto c = evolved_coefficients(baa(0.0, 0.5, 1.0, 0.0, 3.0, 2.0));
  REQUIRE(c[0].size() == 1);
  CHECK(c[0][0].phase == Complex(1.0));
  CHECK(labels_of(c[0][0]) == "cccc");
  CHECK(c[1].empty());
  CHECK(c[2].empty());
  CHECK(c[3].empty());
}

TEST_CASE("evolved_coefficients: AABB phases", "[udw][rho]") {
  const double ta1 = 0.1, ta2 = 0.6, tb1 = 1.3, tb2 = 1.9, wa = 2.7, wb = -1.3;
  const double t[] = {ta1, ta2, tb1, tb2};
  const auto c = evolved_coefficients(DeltaSchedule::from_pattern("AABB", t, 0.3, wa, wb));
  const auto e = [](double phi) { return std::polar(1.0, phi); };
  const double da = wa * (ta2 - ta1), db = wb * (tb2 - tb1);
  // labels in time order A1 A2 B1 B2
  const std::map<std::string, Complex> expected[4] = {
      {{"cccc", 1.0}, {"sscc", e(-da)}, {"ccss", e(-db)}, {"ssss", e(-da - db)}},
      {{"ccsc", e(wb * tb1)}, {"sssc", e(-da + wb * tb1)}, {"cccs", e(wb * tb2)}, {"sscs", e(-da + wb * tb2)}},
      {{"sccc", e(wa * ta1)}, {"cscc", e(wa * ta2)}, {"scss", e(wa * ta1 - db)}, {"csss", e(wa * ta2 - db)}},
      {{"scsc", e(wa * ta1 + wb * tb1)},
       {"cssc", e(wa * ta2 + wb * tb1)},
       {"sccs", e(wa * ta1 + wb * tb2)},
       {"cscs", e(wa * ta2 + wb * tb2)}}};
  for (std::size_t k = 0; k < 4; ++k) {
    REQUIRE(c[k].size() == 4);
    for (const auto& term : c[k]) {
      const auto it = expected[k].find(labels_of(term));
      REQUIRE(it != expected[k].end());
      CHECK(std::abs(term.phase - it->second) < 1e-14);
    }
  }
}

TEST_CASE("rho_element_terms: rho_11 of AABB has the sixteen-term structure", "[udw][rho]") {
  const double ta1 = 0.2, ta2 = 0.7, tb1 = 1.1, tb2 = 2.4, wa = 1.7, wb = 4.1;
  const double t[] = {ta1, ta2, tb1, tb2};
  const auto terms = rho_element_terms(evolved_coefficients(DeltaSchedule::from_pattern("AABB", t, 0.2, wa, wb)), 0, 0);
  const double a = wa * (ta2 - ta1), b = wb * (tb2 - tb1);
  const auto e = [](double phi) { return std::polar(1.0, phi); };
  const std::map<std::string, Complex> expected = {
      {"++++++++", 1.0},        {"++++++--", e(-a)},      {"++++--++", e(-b)},  {"++++----", e(-a - b)},
      {"--++++++", e(a)},       {"--++++--", 1.0},        {"--++--++", e(a - b)}, {"--++----", e(-b)},
      {"++--++++", e(b)},       {"++--++--", e(-a + b)},  {"++----++", 1.0},    {"++------", e(-a)},
      {"----++++", e(a + b)},   {"----++--", e(b)},       {"------++", e(a)},   {"--------", 1.0}};
  REQUIRE(terms.size() == 16);
  for (const auto& term : terms) {
    INFO(term.label.to_string());
    const auto it = expected.find(term.label.to_string());
    REQUIRE(it != expected.end());
    CHECK(std::abs(term.weight - it->second) < 1e-14);
  }
}

//------------------------------------------------------------------------------
// rho_ab and negativity
//------------------------------------------------------------------------------

TEST_CASE("rho_ab: zero coupling gives the ground state", "[udw][rho]") {
  const auto x = rho_ab(baa(0.0, 0.5, 1.0, 0.0, 3.0));
  CHECK(x.r11 == Approx(1.0).margin(1e-15));
  CHECK(x.r22 == Approx(0.0).margin(1e-15));
  CHECK(std::abs(x.r14) < 1e-15);
  CHECK(negativity_of(x) == 0.0);
}

TEST_CASE("rho_ab: unit trace, X pattern and positivity on random schedules", "[udw][rho][property]") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = random_schedule(rng, 2.0);
    INFO(s.pattern() << " lambda " << s.lambda());
    const auto x = rho_ab(s);
    CHECK(std::abs(x.trace() - 1.0) < 1e-10);
    CHECK_NOTHROW(x.validate());
    CHECK(negativity_of(x) >= 0.0);
  }
}

TEST_CASE("rho_ab: the evaluator cache agrees with a fresh evaluation", "[udw][rho]") {
  const RhoAbEvaluator eval(baa(0.0, 0.5, 1.0, 0.3, 0.0));
  for (double w : {0.0, 1.0, 3.0, 7.5}) {
    const auto a = eval.at(w, 2.0);
    const auto b = rho_ab(baa(0.0, 0.5, 1.0, 0.3, w, 2.0));
    CHECK(a.r11 == b.r11);
    CHECK(a.r14 == b.r14);
    CHECK(a.r23 == b.r23);
  }
}

TEST_CASE("negativity: BAA harvests, AAB does not", "[udw][rho]") {
  CHECK(negativity_of(baa(0.0, 0.5, 1.0, 0.1, 3.0)) > 1e-5);
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const double t1 = uniform(rng, 0.0, 2.0), t2 = t1 + uniform(rng, 0.01, 2.0), tb = t2 + uniform(rng, 0.01, 2.0);
    CHECK(negativity_of(aab(t1, t2, tb, uniform(rng, 0.0, 2.0), uniform(rng, -10, 10), uniform(rng, -10, 10))) <=
          1e-12);
  }
}

TEST_CASE("negativity: independent of the gap of a detector that couples once", "[udw][rho][property]") {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const double t_b = uniform(rng, 0.0, 1.0), t_a1 = t_b + uniform(rng, 0.05, 1.0),
                 t_a2 = t_a1 + uniform(rng, 0.05, 1.0);
    const double lambda = uniform(rng, 0.05, 1.0), wa = uniform(rng, 0.0, 10.0);
    const RhoAbEvaluator eval(baa(t_b, t_a1, t_a2, lambda, wa));
    const double n0 = negativity_of(eval.at(wa, 0.0));
    for (double wb : {1.0, 5.0, 20.0}) CHECK(std::abs(negativity_of(eval.at(wa, wb)) - n0) <= 1e-12);
  }
}

TEST_CASE("negativity: periodic in the gap with zeros at resonance", "[udw][rho][property]") {
  for (double t_a2 : {1.0, 2.0}) {
    const double period = 2.0 * kPi / (t_a2 - 0.5);
    const RhoAbEvaluator eval(baa(0.0, 0.5, t_a2, 0.1, 0.0));
    for (double w = 0.0; w < period; w += period / 37.0) {
      CHECK(std::abs(negativity_of(eval.at(w, 0.0)) - negativity_of(eval.at(w + period, 0.0))) <= 1e-10);
    }
    for (int n = -2; n <= 3; ++n) CHECK(negativity_of(eval.at(n * period, 0.0)) <= 1e-12);
  }
}

TEST_CASE("negativity: quadratic at weak coupling, shut off at strong coupling", "[udw][rho]") {
  std::vector<double> xs, ys;
  for (int k = 0; k <= 10; ++k) {
    const double lambda = std::pow(10.0, -3.0 + k / 10.0);
    xs.push_back(std::log(lambda));
    ys.push_back(std::log(negativity_of(baa(0.0, 0.5, 1.0, lambda, 3.0))));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  CHECK(sxy / sxx == Approx(2.0).margin(0.05));
  CHECK(negativity_of(baa(0.0, 0.5, 1.0, 2.0, 3.0)) > negativity_of(baa(0.0, 0.5, 1.0, 1.0, 3.0)));
  for (double lambda : {3.0, 4.0, 6.0, 10.0}) CHECK(negativity_of(baa(0.0, 0.5, 1.0, lambda, 3.0)) <= 1e-12);
}

TEST_CASE("negativity: two vanishing commutator angles forbid harvesting", "[udw][rho][property]") {
  Rng rng(31);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const double t_a1 = uniform(rng, 0.05, 4.0), t_a2 = t_a1 + uniform(rng, 0.0, 4.0);
    const auto flags = commutator_flags(0.0, t_a1, t_a2);
    if (int(flags[0]) + int(flags[1]) + int(flags[2]) > 1) continue;
    ++checked;
    const RhoAbEvaluator eval(baa(0.0, t_a1, t_a2, uniform(rng, 0.05, 2.0), 0.0));
    for (int k = 0; k < 16; ++k) CHECK(negativity_of(eval.at(k * 0.7, 0.0)) <= 1e-12);
  }
  CHECK(checked > 50);
}

TEST_CASE("commutator_flags: separations strictly inside (0, 2)", "[udw]") {
  CHECK(commutator_flags(0.0, 0.2, 1.9) == std::array<bool, 3>{true, true, true});
  CHECK(commutator_flags(0.0, 1.0, 2.5) == std::array<bool, 3>{true, false, true});
  CHECK(commutator_flags(0.0, 2.0, 4.0) == std::array<bool, 3>{false, false, false});
}

//------------------------------------------------------------------------------
// Partial-transpose eigenvalues
//------------------------------------------------------------------------------

TEST_CASE("pt_eigenvalues: maximally mixed and Bell states", "[udw][pt]") {
  XState mixed{0.25, 0.25, 0.25, 0.25, {}, {}};
  for (double e : pt_eigenvalues(mixed)) CHECK(e == Approx(0.25));

  XState bell{0.5, 0.0, 0.0, 0.5, 0.5, {}};
  const auto e = pt_eigenvalues(bell);
  CHECK(*std::min_element(e.begin(), e.end()) == Approx(-0.5));
  CHECK(negativity_of(bell) == Approx(0.5));
}

TEST_CASE("pt_eigenvalues: closed forms equal the numerical partial transpose", "[udw][pt][property]") {
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const XState x = random_xstate(rng);
    REQUIRE_NOTHROW(x.validate());
    auto closed = pt_eigenvalues(x);
    std::sort(closed.begin(), closed.end());
    const std::size_t dims[] = {2, 2};
    const auto numeric = harvest::qmat::eigvalsh(harvest::qmat::partial_transpose(x.to_matrix(), dims, 1));
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(closed[k] - numeric[k]) < 1e-10);
  }
}

TEST_CASE("XState: matrix round trip and validation", "[udw][pt]") {
  Rng rng(3);
  const XState x = random_xstate(rng);
  const XState y = XState::from_matrix(x.to_matrix());
  CHECK(y.r14 == x.r14);
  CHECK(y.r33 == x.r33);

  auto m = x.to_matrix();
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(XState::from_matrix(m), std::invalid_argument);

  XState bad{0.5, 0.5, 0.0, 0.1, {}, {}};
  CHECK_THROWS_AS(bad.validate(), harvest::qmat::NumericalError);
  XState overlap{0.5, 0.0, 0.0, 0.5, 0.6, {}};
  CHECK_THROWS_AS(overlap.validate(), harvest::qmat::NumericalError);
}
