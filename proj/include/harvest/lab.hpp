#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "harvest/udw.hpp"

// Sweeps, verification suites and self-checks behind the harvest-lab CLI.
namespace harvest::lab {

// Invalid command-line or configuration input; the CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const char* version();

//------------------------------------------------------------------------------
// Output
//------------------------------------------------------------------------------

enum class Format { Csv, Json };
Format parse_format(std::string_view name);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;  // nan doubles are written as null / "nan"
};

struct RunInfo {
  std::string command_line;
  std::uint64_t seed = 0;
};

// %.17g; -0 prints as 0, non-finite values as nan / inf.
std::string format_double(double x);

// CSV: "# key: value" metadata and summary lines, then the header row and data.
// JSON: {"metadata": {...}, "summary": {...}, "columns": [...], "rows": [[...], ...]}.
void write_table(std::ostream& out, const Table& table, Format format, const RunInfo& info);

//------------------------------------------------------------------------------
// Parallel evaluation
//------------------------------------------------------------------------------

// Explicit request, else HARVEST_LAB_JOBS, else the hardware concurrency.
unsigned resolve_jobs(std::optional<unsigned> requested);

// f(i) for i in [0, n) on up to `jobs` threads; results in index order. The
// first exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& f);

template <class R, class F>
std::vector<R> parallel_map(std::size_t n, unsigned jobs, F&& f) {
  std::vector<R> out(n);
  parallel_for(n, jobs, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

//------------------------------------------------------------------------------
// Sweeps
//------------------------------------------------------------------------------

// A schedule described by the CLI flags. The pattern selects which couplings
// exist; their times come from the matching t_* fields and must reproduce the
// pattern's order.
struct ScheduleParams {
  std::string pattern = "BAA";
  double lambda = 0.1;
  double omega_a = 3.0;
  double omega_b = 0.0;
  double t_a1 = 0.5;
  double t_a2 = 1.0;
  double t_b1 = 0.0;
  double t_b2 = 1.5;

  udw::DeltaSchedule build() const;  // throws UsageError
};

// Inclusive range sampled at `steps` points.
struct Range {
  double min = 0.0;
  double max = 1.0;
  std::size_t steps = 2;
  bool log_spacing = false;

  void validate(const std::string& name) const;  // throws UsageError
  double at(std::size_t i) const;
  double step() const;  // linear spacing only
};

struct GapSweep {
  ScheduleParams fixed;
  Range omega_a{0.0, 8.0 * std::numbers::pi, 401};
  unsigned jobs = 1;
};

// Columns omega_a, negativity, E1..E4; summary holds the detected period.
Table sweep_gap(const GapSweep& spec);

// Lag of the first autocorrelation peak past the first negative lobe, refined by
// a parabola through the peak and its neighbours, times `step`. nan when the
// series is constant or shows no peak.
double detect_period(std::span<const double> values, double step);

struct LambdaSweep {
  ScheduleParams fixed;
  Range lambda{1e-3, 4.0, 161, true};
  unsigned jobs = 1;
};

struct LambdaSummary {
  double slope = 0.0;    // log-log slope over the first decade of the range
  double argmax = 0.0;   // lambda of the largest negativity
  double shutoff = 0.0;  // smallest lambda past the maximum from which N stays zero; nan if none
};

// Columns lambda, negativity, sqrt_negativity.
Table sweep_lambda(const LambdaSweep& spec);
LambdaSummary summarize_lambda(std::span<const double> lambdas, std::span<const double> negativities);

struct RegionMap {
  ScheduleParams fixed;
  Range t_a1{0.05, 2.0, 40};
  Range t_a2{0.05, 2.6, 40};
  std::size_t omega_samples = 64;
  unsigned jobs = 1;
};

// Columns t_a1, t_a2, max_negativity, commutator_flags over grid points with
// t_a1 <= t_a2 (BAA order). Flags read B1A1, B1A2, A1A2; '1' = nonvanishing.
Table region_map(const RegionMap& spec);

// Max of N over `samples` gaps spread evenly over one period 2 pi / (t_a2 - t_a1)
// (over [0, 2 pi) when the two A couplings coincide).
double max_negativity_over_gap(const ScheduleParams& params, std::size_t samples);

std::string flags_string(const std::array<bool, 3>& flags);

//------------------------------------------------------------------------------
// Verification suites and self-test
//------------------------------------------------------------------------------

struct VerifyReport {
  std::string suite;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string failing_instance;  // replay description when !passed
};

std::span<const std::string_view> verify_suites();

// Throws UsageError for an unknown suite name.
VerifyReport run_verify(std::string_view suite, std::size_t trials, std::uint64_t seed, unsigned jobs = 1);
std::string to_json(const VerifyReport& report);

// Default trial counts per suite.
std::size_t default_trials(std::string_view suite);

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  std::uint64_t seed = 1;
  bool corrupt_f_convention = false;  // test hook: evaluate h with the literal f convention
};

// Runs the checks in order and stops after the first failure.
std::vector<SelftestCheck> run_selftest(const SelftestOptions& options,
                                        const std::function<void(const SelftestCheck&)>& on_check = {});

}  // namespace harvest::lab
