#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "harvest/fock_oracle.hpp"
#include "harvest/random.hpp"
#include "harvest/udw.hpp"

using namespace harvest;
using namespace harvest::udw;
using fock::ModeConfig;
using qmat::Rng;

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::array<double, 4> random_times(Rng& rng) {
  std::array<double, 4> t{};
  double now = uniform(rng, 0.0, 0.5);
  for (auto& x : t) {
    // a quarter of the gaps are zero, as for a detector that couples once
    if (rng() % 4 != 0) now += uniform(rng, 0.05, 1.0);
    x = now;
  }
  return t;
}

}  // namespace

TEST_CASE("match_amplitudes: Gram matrix and commutators reproduced", "[fock]") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto t = random_times(rng);
    const double lambda = uniform(rng, 0.05, 1.5);
    const auto cfg = fock::match_amplitudes(t, lambda);
    CHECK(cfg.n_modes <= ModeConfig::kMaxModes);
    CHECK(fock::gram_residual(cfg, t, lambda) < 1e-10);
    CHECK(fock::tail_mass(cfg) <= fock::kTailBound);
    for (std::size_t u = 0; u < 4; ++u)
      for (std::size_t v = 0; v < 4; ++v) {
        Complex g{};
        for (std::size_t m = 0; m < cfg.n_modes; ++m) g += std::conj(cfg.amplitudes[u][m]) * cfg.amplitudes[v][m];
        // [Y_v, Y_u] = 2i Im <beta_u, beta_v>
        CHECK(std::abs(2.0 * g.imag() - theta(t[v] - t[u], lambda)) < 1e-10);
      }
  }
}

TEST_CASE("match_amplitudes: a single coupling is one displaced mode", "[fock]") {
  const double lambda = 0.4, t[] = {0.7};
  const auto cfg = fock::match_amplitudes(t, lambda);
  REQUIRE(cfg.n_modes == 1);
  const double scale = 9.0 * lambda * lambda / (8.0 * std::numbers::pi * std::numbers::pi);
  CHECK(std::norm(cfg.amplitudes[0][0]) == Catch::Approx(scale * i_c(0.0)).epsilon(1e-12));
  // a doubled coupling displaces by twice the amplitude
  CHECK(std::exp(-0.5 * std::norm(2.0 * cfg.amplitudes[0][0])) ==
        Catch::Approx(vacuum_overlap({2, 0, 0, 0}, {0.7, 0.0, 0.0, 0.0}, lambda)).epsilon(1e-12));
}

TEST_CASE("match_amplitudes: zero coupling needs no modes", "[fock]") {
  const double t[] = {0.0, 0.5, 1.0, 1.5};
  const auto cfg = fock::match_amplitudes(t, 0.0);
  CHECK(cfg.n_modes == 0);
  CHECK(cfg.hilbert_dim() == 1);
  CHECK(std::abs(fock::brute_h(SignPattern(), cfg) - 1.0) < 1e-15);
  CHECK(std::abs(fock::brute_h(SignPattern::parse("-+++++++"), cfg)) < 1e-15);
}

TEST_CASE("brute_h: odd patterns vanish", "[fock]") {
  const double t[] = {0.0, 0.3, 0.9, 1.6};
  const auto cfg = fock::match_amplitudes(t, 0.8);
  for (unsigned m = 0; m < SignPattern::kCount; m += 7) {
    const auto l = SignPattern::from_mask(m);
    if (l.minus_count() % 2 == 1) CHECK(std::abs(fock::brute_h(l, cfg)) < 1e-12);
  }
}

TEST_CASE("brute_h: agrees with the closed-form h on random draws", "[fock][oracle]") {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const auto t = random_times(rng);
    const double lambda = uniform(rng, 0.05, 1.2);
    const auto cfg = fock::match_amplitudes(t, lambda);
    const CouplingContext ctx{t, lambda};
    for (int k = 0; k < 4; ++k) {
      // even patterns only; odd ones are zero on both sides
      unsigned m = static_cast<unsigned>(rng() % SignPattern::kCount);
      if (std::popcount(m) % 2 == 1) m ^= 1u;
      const auto l = SignPattern::from_mask(m);
      INFO("trial " << trial << " pattern " << l.to_string() << " lambda " << lambda);
      CHECK(std::abs(fock::brute_h(l, cfg) - h_function(l, ctx)) < 1e-6);
    }
  }
}

TEST_CASE("brute_h: the literal f convention is caught", "[fock][oracle]") {
  const std::array<double, 4> t = {0.0, 0.0, 0.5, 1.0};
  const double lambda = 0.6;
  const auto cfg = fock::match_amplitudes(t, lambda);
  const CouplingContext ctx{t, lambda};
  double worst = 0.0;
  for (unsigned m = 0; m < SignPattern::kCount; ++m) {
    const auto l = SignPattern::from_mask(m);
    if (l.minus_count() % 2 == 1) continue;
    worst = std::max(worst, std::abs(fock::brute_h(l, cfg) - h_function(l, ctx, FConvention::Literal)));
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("brute_rho_ab: agrees with rho_ab", "[fock][oracle]") {
  Rng rng(55);
  const auto patterns = supported_patterns();
  for (int trial = 0; trial < 20; ++trial) {
    const std::string_view pattern = patterns[static_cast<std::size_t>(trial) % patterns.size()];
    std::vector<double> t(pattern.size());
    double now = uniform(rng, 0.0, 0.5);
    for (auto& x : t) {
      x = now;
      now += uniform(rng, 0.05, 1.0);
    }
    const auto s = DeltaSchedule::from_pattern(pattern, t, uniform(rng, 0.05, 1.0), uniform(rng, -8, 8),
                                               uniform(rng, -8, 8));
    INFO(s.pattern() << " lambda " << s.lambda());
    const auto brute = fock::brute_rho_ab(s);
    const auto closed = rho_ab(s).to_matrix();
    CHECK((brute - closed).max_abs() < 1e-8);
  }
}

TEST_CASE("brute_h_fixed: too small a cutoff is refused", "[fock]") {
  const double t[] = {0.0, 0.3, 0.9, 1.6};
  auto cfg = fock::match_amplitudes(t, 1.0);
  for (auto& c : cfg.cutoffs) c = 1;
  CHECK_THROWS_AS(fock::brute_h_fixed(SignPattern(), cfg), fock::PrecisionError);
  const double three[] = {0.0, 0.3, 0.9};
  CHECK_THROWS_AS(fock::brute_h_fixed(SignPattern(), fock::match_amplitudes(three, 1.0)), std::invalid_argument);
}
