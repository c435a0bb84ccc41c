#include <algorithm>
#include <cmath>
#include <random>

#include "harvest/fock_oracle.hpp"
#include "harvest/lab.hpp"
#include "harvest/quadrature.hpp"
#include "harvest/random.hpp"

namespace harvest::lab {

namespace {

using udw::Complex;
using udw::SignPattern;

double uniform(qmat::Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

SelftestCheck exact_values() {
  const double i_c2 = (5.0 - 8.0 * std::log(2.0)) / 12.0;
  const double err0 = std::abs(udw::i_c(0.0) - 0.25), err2 = std::abs(udw::i_c(2.0) - i_c2);
  return {"exact i_c(0) = 1/4 and i_c(2) = (5 - 8 ln 2)/12", err0 == 0.0 && err2 <= 2e-16,
          "errors " + format_double(err0) + ", " + format_double(err2)};
}

SelftestCheck quadrature_agreement() {
  double worst = 0.0;
  for (int k = 0; k < 25; ++k) {
    const double xs = -1.2 + 4.4 * k / 24.0, xc = -3.0 + 28.0 * k / 24.0;
    worst = std::max(worst, std::abs(quadrature::i_s_numeric(xs).value - udw::i_s(xs)));
    worst = std::max(worst, std::abs(quadrature::i_c_numeric(xc).value - udw::i_c(xc)));
  }
  return {"i_s and i_c closed forms vs quadrature (25 points each)", worst <= 1e-8,
          "max deviation " + format_double(worst)};
}

// Random schedule; its h values and rho_ab against the truncated-Fock brute force.
SelftestCheck fock_agreement(std::uint64_t seed, udw::FConvention convention) {
  qmat::Rng rng(seed);
  const auto patterns = udw::supported_patterns();
  double worst_h = 0.0, worst_rho = 0.0;
  std::string where;
  for (int instance = 0; instance < 10; ++instance) {
    const std::string_view pattern = patterns[rng() % patterns.size()];
    std::vector<double> t(pattern.size());
    double now = uniform(rng, 0.0, 0.5);
    for (auto& x : t) {
      x = now;
      now += uniform(rng, 0.05, 1.0);
    }
    const auto s = udw::DeltaSchedule::from_pattern(pattern, t, uniform(rng, 0.05, 1.0), uniform(rng, -8.0, 8.0),
                                                    uniform(rng, -8.0, 8.0));
    const auto cfg = fock::match_amplitudes(s);
    const auto ctx = s.context();
    std::vector<SignPattern> labels = {SignPattern()};
    while (labels.size() < 4) {
      const unsigned m = static_cast<unsigned>(rng() % SignPattern::kCount);
      if (std::popcount(m) % 2 == 0) labels.push_back(SignPattern::from_mask(m));
    }
    for (const auto& l : labels) {
      const double d = std::abs(udw::h_function(l, ctx, convention) - fock::brute_h(l, cfg));
      if (d > worst_h) {
        worst_h = d;
        where = "instance " + std::to_string(instance) + " pattern " + s.pattern() + " label " + l.to_string();
      }
    }
    worst_rho = std::max(worst_rho, (fock::brute_rho_ab(s) - udw::rho_ab(s).to_matrix()).max_abs());
  }
  return {"h and rho_ab vs Fock-space brute force (10 instances)", worst_h <= 1e-6 && worst_rho <= 1e-8,
          "max h deviation " + format_double(worst_h) + (worst_h > 1e-6 ? " at " + where : "") +
              ", max rho deviation " + format_double(worst_rho)};
}

SelftestCheck eigenvalue_routes(std::uint64_t seed) {
  qmat::Rng rng(seed);
  double worst = 0.0;
  const std::size_t dims[] = {2, 2};
  const auto check = [&](const udw::XState& x) {
    auto closed = udw::pt_eigenvalues(x);
    std::sort(closed.begin(), closed.end());
    const auto numeric = qmat::eigvalsh(qmat::partial_transpose(x.to_matrix(), dims, 1));
    for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(closed[k] - numeric[k]));
  };
  for (int trial = 0; trial < 1000; ++trial) {
    udw::XState x;
    const auto block = [&](double& p, double& q, Complex& c) {
      p = uniform(rng, 0.0, 1.0);
      q = uniform(rng, 0.0, 1.0);
      c = std::polar(uniform(rng, 0.0, 1.0) * std::sqrt(p * q), uniform(rng, -3.2, 3.2));
    };
    block(x.r11, x.r44, x.r14);
    block(x.r22, x.r33, x.r23);
    check(x);
  }
  for (double omega : {0.0, 1.0, 3.0, 6.0}) {
    const double t[] = {0.0, 0.5, 1.0};
    check(udw::rho_ab(udw::DeltaSchedule::from_pattern("BAA", t, 0.5, omega, 0.0)));
  }
  return {"partial-transpose eigenvalues: closed form vs numerical", worst <= 1e-10,
          "max deviation " + format_double(worst)};
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options,
                                        const std::function<void(const SelftestCheck&)>& on_check) {
  const udw::FConvention convention =
      options.corrupt_f_convention ? udw::FConvention::Literal : udw::FConvention::Hyperbolic;
  const std::function<SelftestCheck()> checks[] = {
      exact_values,
      quadrature_agreement,
      [&] { return fock_agreement(qmat::derive_seed(options.seed, 1), convention); },
      [&] { return eigenvalue_routes(qmat::derive_seed(options.seed, 2)); },
  };
  std::vector<SelftestCheck> out;
  for (const auto& run : checks) {
    SelftestCheck c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c = {"(check threw)", false, e.what()};
    }
    out.push_back(c);
    if (on_check) on_check(c);
    if (!c.passed) break;
  }
  return out;
}

}  // namespace harvest::lab
