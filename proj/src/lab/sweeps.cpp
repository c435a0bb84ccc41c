#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "harvest/lab.hpp"

namespace harvest::lab {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kZero = 1e-12;  // negativity treated as zero in summaries

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

ScheduleParams with_lambda(ScheduleParams p, double lambda) {
  p.lambda = lambda;
  return p;
}

}  // namespace

udw::DeltaSchedule ScheduleParams::build() const {
  const std::string want = upper(pattern);
  const auto supported = udw::supported_patterns();
  if (std::find(supported.begin(), supported.end(), want) == supported.end()) {
    throw UsageError("unsupported pattern \"" + pattern + "\"");
  }
  const auto n_a = std::count(want.begin(), want.end(), 'A');
  const auto n_b = std::count(want.begin(), want.end(), 'B');
  std::vector<udw::DeltaEvent> events;
  events.push_back({udw::Detector::A, t_a1, 1});
  if (n_a == 2) events.push_back({udw::Detector::A, t_a2, 2});
  events.push_back({udw::Detector::B, t_b1, 1});
  if (n_b == 2) events.push_back({udw::Detector::B, t_b2, 2});
  try {
    udw::DeltaSchedule s(std::move(events), lambda, omega_a, omega_b);
    if (s.pattern() != want) {
      throw UsageError("coupling times give the order " + s.pattern() + ", not the requested pattern " + want);
    }
    return s;
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void Range::validate(const std::string& name) const {
  if (!std::isfinite(min) || !std::isfinite(max)) throw UsageError(name + ": range bounds must be finite");
  if (steps < 2) throw UsageError(name + ": steps must be at least 2, got " + std::to_string(steps));
  if (!(min < max)) throw UsageError(name + ": min must be below max");
  if (log_spacing && min <= 0.0) throw UsageError(name + ": log spacing needs a positive minimum");
}

double Range::at(std::size_t i) const {
  if (i + 1 == steps) return max;
  const double f = static_cast<double>(i) / static_cast<double>(steps - 1);
  if (log_spacing) return min * std::pow(max / min, f);
  return min + f * (max - min);
}

double Range::step() const { return (max - min) / static_cast<double>(steps - 1); }

//------------------------------------------------------------------------------
// sweep-gap
//------------------------------------------------------------------------------

double detect_period(std::span<const double> values, double step) {
  const std::size_t n = values.size();
  if (n < 8) return kNan;
  // Pearson correlation of the series with its lag-k shift; exactly 1 at an
  // exact period regardless of window edges.
  const auto corr = [&](std::size_t k) {
    const std::size_t m = n - k;
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < m; ++i) {
      ma += values[i];
      mb += values[i + k];
    }
    ma /= static_cast<double>(m);
    mb /= static_cast<double>(m);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = values[i] - ma, b = values[i + k] - mb;
      sab += a * b;
      saa += a * a;
      sbb += b * b;
    }
    return saa > 0.0 && sbb > 0.0 ? sab / std::sqrt(saa * sbb) : 0.0;
  };
  const std::size_t k_max = n - n / 4;
  std::vector<double> r(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) r[k] = corr(k);
  if (!(r[0] > 0.0)) return kNan;
  std::size_t k = 1;
  while (k < k_max && r[k] >= 0.0) ++k;
  for (; k < k_max; ++k) {
    if (r[k] >= r[k - 1] && r[k] >= r[k + 1] && r[k] > 0.5) {
      const double curvature = r[k - 1] - 2.0 * r[k] + r[k + 1];
      const double shift = curvature < 0.0 ? 0.5 * (r[k - 1] - r[k + 1]) / curvature : 0.0;
      return (static_cast<double>(k) + shift) * step;
    }
  }
  return kNan;
}

Table sweep_gap(const GapSweep& spec) {
  spec.omega_a.validate("omega_a");
  if (spec.omega_a.log_spacing) throw UsageError("omega_a: log spacing is not supported");
  const udw::RhoAbEvaluator eval(spec.fixed.build());

  const auto points = parallel_map<udw::XState>(spec.omega_a.steps, spec.jobs, [&](std::size_t i) {
    udw::XState x = eval.at(spec.omega_a.at(i), spec.fixed.omega_b);
    x.validate();
    return x;
  });

  Table t;
  t.columns = {"omega_a", "negativity", "E1", "E2", "E3", "E4"};
  std::vector<double> negs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto e = udw::pt_eigenvalues(points[i]);
    negs.push_back(udw::negativity_of(points[i]));
    t.rows.push_back({spec.omega_a.at(i), negs.back(), e[0], e[1], e[2], e[3]});
  }
  const std::string pattern = upper(spec.fixed.pattern);
  const bool a_twice = std::count(pattern.begin(), pattern.end(), 'A') == 2;
  const double spacing = spec.fixed.t_a2 - spec.fixed.t_a1;
  t.summary.emplace_back("detected_period", detect_period(negs, spec.omega_a.step()));
  t.summary.emplace_back("expected_period", a_twice && spacing > 0.0 ? 2.0 * std::numbers::pi / spacing : kNan);
  t.summary.emplace_back("max_negativity", *std::max_element(negs.begin(), negs.end()));
  return t;
}

//------------------------------------------------------------------------------
// sweep-lambda
//------------------------------------------------------------------------------

LambdaSummary summarize_lambda(std::span<const double> lambdas, std::span<const double> negativities) {
  LambdaSummary s;
  const std::size_t n = lambdas.size();
  if (n == 0 || negativities.size() != n) throw std::invalid_argument("summarize_lambda: size mismatch");

  std::vector<double> xs, ys;
  const double decade_end = 10.0 * lambdas.front() * (1.0 + 1e-12);
  for (std::size_t i = 0; i < n && lambdas[i] <= decade_end; ++i) {
    if (lambdas[i] > 0.0 && negativities[i] > 0.0) {
      xs.push_back(std::log(lambdas[i]));
      ys.push_back(std::log(negativities[i]));
    }
  }
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    s.slope = sxx > 0.0 ? sxy / sxx : kNan;
  } else {
    s.slope = kNan;
  }

  const auto peak = static_cast<std::size_t>(std::max_element(negativities.begin(), negativities.end()) -
                                             negativities.begin());
  s.argmax = lambdas[peak];
  std::size_t first_zero = n;
  while (first_zero > peak + 1 && negativities[first_zero - 1] <= kZero) --first_zero;
  s.shutoff = first_zero < n && negativities[peak] > kZero ? lambdas[first_zero] : kNan;
  return s;
}

Table sweep_lambda(const LambdaSweep& spec) {
  spec.lambda.validate("lambda");
  if (spec.lambda.min < 0.0) throw UsageError("lambda: values must be >= 0");
  spec.fixed.build();

  const auto negs = parallel_map<double>(spec.lambda.steps, spec.jobs, [&](std::size_t i) {
    return udw::negativity_of(with_lambda(spec.fixed, spec.lambda.at(i)).build());
  });

  Table t;
  t.columns = {"lambda", "negativity", "sqrt_negativity"};
  std::vector<double> lambdas;
  for (std::size_t i = 0; i < negs.size(); ++i) {
    lambdas.push_back(spec.lambda.at(i));
    t.rows.push_back({lambdas.back(), negs[i], std::sqrt(negs[i])});
  }
  const auto s = summarize_lambda(lambdas, negs);
  t.summary.emplace_back("small_lambda_slope", s.slope);
  t.summary.emplace_back("argmax_lambda", s.argmax);
  t.summary.emplace_back("max_negativity", *std::max_element(negs.begin(), negs.end()));
  t.summary.emplace_back("shutoff_lambda", s.shutoff);
  return t;
}

//------------------------------------------------------------------------------
// region-map
//------------------------------------------------------------------------------

std::string flags_string(const std::array<bool, 3>& flags) {
  std::string s;
  for (bool f : flags) s += f ? '1' : '0';
  return s;
}

double max_negativity_over_gap(const ScheduleParams& params, std::size_t samples) {
  if (samples == 0) throw UsageError("omega samples must be at least 1");
  const udw::RhoAbEvaluator eval(params.build());
  const double spacing = params.t_a2 - params.t_a1;
  const double period = 2.0 * std::numbers::pi / (spacing > 0.0 ? spacing : 1.0);
  double best = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double omega = period * static_cast<double>(k) / static_cast<double>(samples);
    best = std::max(best, udw::negativity_of(eval.at(omega, params.omega_b)));
  }
  return best;
}

Table region_map(const RegionMap& spec) {
  spec.t_a1.validate("t_a1");
  spec.t_a2.validate("t_a2");
  if (spec.omega_samples == 0) throw UsageError("omega samples must be at least 1");
  if (upper(spec.fixed.pattern) != "BAA") throw UsageError("region-map scans the BAA order; use --pattern baa");
  if (!(spec.fixed.t_b1 < std::min(spec.t_a1.min, spec.t_a2.min))) {
    throw UsageError("region-map needs t_b1 before every sampled A coupling time");
  }
  spec.fixed.build();

  std::vector<std::pair<double, double>> grid;
  for (std::size_t i = 0; i < spec.t_a1.steps; ++i)
    for (std::size_t j = 0; j < spec.t_a2.steps; ++j) {
      const double a1 = spec.t_a1.at(i), a2 = spec.t_a2.at(j);
      if (a1 <= a2) grid.emplace_back(a1, a2);
    }
  if (grid.empty()) throw UsageError("region-map: no grid point has t_a1 <= t_a2");

  const auto values = parallel_map<double>(grid.size(), spec.jobs, [&](std::size_t k) {
    ScheduleParams p = spec.fixed;
    p.t_a1 = grid[k].first;
    p.t_a2 = grid[k].second;
    return max_negativity_over_gap(p, spec.omega_samples);
  });

  Table t;
  t.columns = {"t_a1", "t_a2", "max_negativity", "commutator_flags"};
  std::size_t positive = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto flags = udw::commutator_flags(spec.fixed.t_b1, grid[k].first, grid[k].second);
    positive += values[k] > kZero ? 1 : 0;
    t.rows.push_back({grid[k].first, grid[k].second, values[k], flags_string(flags)});
  }
  t.summary.emplace_back("grid_points", static_cast<std::int64_t>(grid.size()));
  t.summary.emplace_back("entangling_points", static_cast<std::int64_t>(positive));
  t.summary.emplace_back("omega_samples", static_cast<std::int64_t>(spec.omega_samples));
  return t;
}

}  // namespace harvest::lab
