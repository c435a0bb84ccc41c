#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "harvest/lab.hpp"
#include "harvest/nogo.hpp"
#include "harvest/random.hpp"
#include "json.hpp"

namespace harvest::lab {

namespace {

constexpr std::string_view kSuites[] = {"eb", "commutators", "two_qubit_source", "toys", "nogo_aab"};

constexpr double kNogoTolerance = 1e-10;
constexpr double kFieldTolerance = 1e-12;

std::string num(double x) { return format_double(x); }

VerifyReport from_suites(std::string_view name, std::initializer_list<nogo::SuiteResult> parts, std::size_t trials,
                         std::uint64_t seed) {
  VerifyReport r{std::string(name), trials, seed, 0.0, kNogoTolerance, true, {}};
  for (const auto& p : parts) {
    if (p.max_negativity >= r.max_violation) {
      r.max_violation = p.max_negativity;
      r.failing_instance = p.suite + ": " + p.worst_instance;
    }
  }
  r.passed = r.max_violation <= r.tolerance;
  if (r.passed) r.failing_instance.clear();
  return r;
}

VerifyReport verify_toys(std::uint64_t seed) {
  VerifyReport r{"toys", 0, seed, 0.0, kNogoTolerance, true, {}};
  for (const auto& toy : nogo::toy_circuits()) {
    ++r.trials;
    const auto res = nogo::run_toy(toy);
    double v = std::max(std::abs(1.0 - res.fidelity), std::abs(res.negativity - 0.5));
    std::string why = "fidelity " + num(res.fidelity) + ", negativity " + num(res.negativity);
    if (toy.expected_vanishing) {
      const auto profile = nogo::commutator_profile(toy.sequence);
      if (profile.vanishing != *toy.expected_vanishing) {
        v = std::max(v, 1.0);
        why += ", commutator pattern differs from the expected one";
      }
    }
    if (v >= r.max_violation) {
      r.max_violation = v;
      r.failing_instance = toy.name + ": " + why;
    }
  }
  r.passed = r.max_violation <= r.tolerance;
  if (r.passed) r.failing_instance.clear();
  return r;
}

// AAB grid: n points per axis over t_a1 in [0, 2], t_a2 - t_a1 in [0, 2.5] and
// Omega_A in [0, 4 pi], for each lambda. The seed draws B's delay after A2 and Omega_B.
VerifyReport verify_nogo_aab(std::size_t n, std::uint64_t seed, unsigned jobs) {
  if (n < 2) throw UsageError("nogo_aab: --trials sets points per grid axis and must be at least 2");
  constexpr double kLambdas[] = {0.1, 0.5, 1.0, 2.0};
  const auto axis = [n](double lo, double hi, std::size_t i) {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  struct Cell {
    double t_a1, t_a2, t_b1, omega_b, lambda;
  };
  std::vector<Cell> cells;
  qmat::Rng rng(seed);
  std::uniform_real_distribution<double> delay(0.05, 2.0), gap_b(0.0, 10.0);
  for (double lambda : kLambdas)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double t_a1 = axis(0.0, 2.0, i), t_a2 = t_a1 + axis(0.0, 2.5, j);
        const double t_b1 = t_a2 + delay(rng);
        cells.push_back({t_a1, t_a2, t_b1, gap_b(rng), lambda});
      }

  struct Worst {
    double n = 0.0;
    double omega = 0.0;
  };
  const auto worst = parallel_map<Worst>(cells.size(), jobs, [&](std::size_t k) {
    const auto& c = cells[k];
    const double t[] = {c.t_a1, c.t_a2, c.t_b1};
    const udw::RhoAbEvaluator eval(udw::DeltaSchedule::from_pattern("AAB", t, c.lambda, 0.0, c.omega_b));
    Worst w;
    for (std::size_t m = 0; m < n; ++m) {
      const double omega = axis(0.0, 4.0 * std::numbers::pi, m);
      const double neg = udw::negativity_of(eval.at(omega, c.omega_b));
      if (neg >= w.n) w = {neg, omega};
    }
    return w;
  });

  VerifyReport r{"nogo_aab", cells.size() * n, seed, 0.0, kFieldTolerance, true, {}};
  std::size_t at = 0;
  for (std::size_t k = 0; k < worst.size(); ++k) {
    if (worst[k].n >= r.max_violation) {
      r.max_violation = worst[k].n;
      at = k;
    }
  }
  r.passed = r.max_violation <= r.tolerance;
  if (!r.passed) {
    const auto& c = cells[at];
    r.failing_instance = "pattern AAB t_a1 " + num(c.t_a1) + " t_a2 " + num(c.t_a2) + " t_b1 " + num(c.t_b1) +
                         " lambda " + num(c.lambda) + " omega_a " + num(worst[at].omega) + " omega_b " +
                         num(c.omega_b);
  }
  return r;
}

}  // namespace

std::span<const std::string_view> verify_suites() { return kSuites; }

std::size_t default_trials(std::string_view suite) {
  if (suite == "eb" || suite == "commutators") return 500;
  if (suite == "two_qubit_source") return 200;
  if (suite == "toys") return 4;
  if (suite == "nogo_aab") return 10;
  throw UsageError("unknown verify suite \"" + std::string(suite) + "\"");
}

VerifyReport run_verify(std::string_view suite, std::size_t trials, std::uint64_t seed, unsigned jobs) {
  default_trials(suite);  // validates the name
  if (trials == 0) throw UsageError("--trials must be at least 1");
  if (suite == "eb") {
    // single couplings through the witness, and the same theorem inside full sequences
    return from_suites(suite,
                       {nogo::verify_eb_channels(trials, qmat::derive_seed(seed, 1)),
                        nogo::verify_last_coupling(trials, qmat::derive_seed(seed, 2))},
                       trials, seed);
  }
  if (suite == "commutators") return from_suites(suite, {nogo::verify_two_commutators(trials, seed)}, trials, seed);
  if (suite == "two_qubit_source") return from_suites(suite, {nogo::twoqubit_source_nogo(trials, seed)}, trials, seed);
  if (suite == "toys") return verify_toys(seed);
  return verify_nogo_aab(trials, seed, jobs);
}

std::string to_json(const VerifyReport& report) {
  const auto str = [](const std::string& v) { return nlohmann::json(v).dump(); };
  std::string j = "{\"suite\":" + str(report.suite) + ",\"trials\":" + std::to_string(report.trials) +
                  ",\"max_violation\":" + format_double(report.max_violation) +
                  ",\"seed\":" + std::to_string(report.seed) + ",\"tolerance\":" + format_double(report.tolerance) +
                  ",\"passed\":" + (report.passed ? "true" : "false");
  if (!report.passed) j += ",\"failing_instance\":" + str(report.failing_instance);
  return j + "}";
}

}  // namespace harvest::lab
