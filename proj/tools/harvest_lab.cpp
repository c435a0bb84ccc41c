#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "harvest/lab.hpp"
#include "harvest/nogo.hpp"
#include "json.hpp"

namespace {

using namespace harvest;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Every option that may come from the command line or a config file. Unset
// optionals fall back to the config file, then to the built-in defaults.
struct Flags {
  std::optional<double> lambda, omega_a, omega_b, tb1, ta1, ta2, tb2;
  std::optional<double> omega_min, omega_max, lambda_min, lambda_max, ta1_min, ta1_max, ta2_min, ta2_max;
  std::optional<std::size_t> steps, ta1_steps, ta2_steps, omega_samples, trials;
  std::optional<std::string> pattern, out, format, spacing, config;
  std::optional<unsigned> jobs;
  std::optional<unsigned long long> seed;
};

using Slot = std::variant<std::optional<double>*, std::optional<std::size_t>*, std::optional<std::string>*,
                          std::optional<unsigned>*, std::optional<unsigned long long>*>;

std::map<std::string, Slot> slots(Flags& f) {
  return {{"lambda", &f.lambda},         {"omega-a", &f.omega_a},         {"omega-b", &f.omega_b},
          {"tb1", &f.tb1},               {"ta1", &f.ta1},                 {"ta2", &f.ta2},
          {"tb2", &f.tb2},               {"omega-min", &f.omega_min},     {"omega-max", &f.omega_max},
          {"lambda-min", &f.lambda_min}, {"lambda-max", &f.lambda_max},   {"ta1-min", &f.ta1_min},
          {"ta1-max", &f.ta1_max},       {"ta2-min", &f.ta2_min},         {"ta2-max", &f.ta2_max},
          {"steps", &f.steps},           {"ta1-steps", &f.ta1_steps},     {"ta2-steps", &f.ta2_steps},
          {"omega-samples", &f.omega_samples}, {"trials", &f.trials},     {"pattern", &f.pattern},
          {"out", &f.out},               {"format", &f.format},           {"spacing", &f.spacing},
          {"jobs", &f.jobs},             {"seed", &f.seed}};
}

// Fills options the command line left unset from a JSON object keyed by long flag names.
void apply_config(Flags& flags) {
  if (!flags.config) return;
  std::ifstream in(*flags.config);
  if (!in) throw lab::UsageError("cannot read config file " + *flags.config);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw lab::UsageError("config file " + *flags.config + ": " + e.what());
  }
  if (!doc.is_object()) throw lab::UsageError("config file must hold a single JSON object");
  auto table = slots(flags);
  for (const auto& [key, value] : doc.items()) {
    const auto it = table.find(key);
    if (it == table.end()) throw lab::UsageError("config file: unknown key \"" + key + "\"");
    try {
      std::visit(
          [&value](auto* slot) {
            using T = typename std::remove_pointer_t<decltype(slot)>::value_type;
            if constexpr (std::is_same_v<T, std::string>) {
              if (!value.is_string()) throw lab::UsageError("expected a string");
            } else if constexpr (std::is_same_v<T, double>) {
              if (!value.is_number()) throw lab::UsageError("expected a number");
            } else {
              if (!value.is_number_unsigned()) throw lab::UsageError("expected a non-negative integer");
            }
            if (!*slot) *slot = value.get<T>();
          },
          it->second);
    } catch (const lab::UsageError& e) {
      throw lab::UsageError("config file: key \"" + key + "\": " + e.what());
    }
  }
}

template <class T>
void add(CLI::App* app, const std::string& name, std::optional<T>& target, const std::string& help) {
  app->add_option("--" + name, target, help);
}

void add_schedule_flags(CLI::App* app, Flags& f) {
  add(app, "lambda", f.lambda, "coupling strength (default 0.1)");
  add(app, "omega-a", f.omega_a, "gap of detector A (default 3)");
  add(app, "omega-b", f.omega_b, "gap of detector B (default 0)");
  add(app, "tb1", f.tb1, "time of B's first coupling (default 0)");
  add(app, "tb2", f.tb2, "time of B's second coupling (default 1.5)");
  add(app, "ta1", f.ta1, "time of A's first coupling (default 0.5)");
  add(app, "ta2", f.ta2, "time of A's second coupling (default 1)");
  add(app, "pattern", f.pattern, "coupling order: aab, aba, baa, aabb, abba, ... (default baa)");
}

void add_output_flags(CLI::App* app, Flags& f) {
  add(app, "out", f.out, "output file (default stdout)");
  add(app, "format", f.format, "csv or json (default csv)");
  add(app, "jobs", f.jobs, "worker threads (default HARVEST_LAB_JOBS, else all cores)");
  add(app, "seed", f.seed, "seed recorded in the metadata (default 1)");
  add(app, "config", f.config, "JSON file with defaults for any long option");
}

lab::ScheduleParams schedule_params(const Flags& f) {
  lab::ScheduleParams p;
  p.pattern = f.pattern.value_or(p.pattern);
  p.lambda = f.lambda.value_or(p.lambda);
  p.omega_a = f.omega_a.value_or(p.omega_a);
  p.omega_b = f.omega_b.value_or(p.omega_b);
  p.t_a1 = f.ta1.value_or(p.t_a1);
  p.t_a2 = f.ta2.value_or(p.t_a2);
  p.t_b1 = f.tb1.value_or(p.t_b1);
  p.t_b2 = f.tb2.value_or(p.t_b2);
  return p;
}

std::string command_line(int argc, char** argv) {
  std::string s = "harvest-lab";
  for (int i = 1; i < argc; ++i) s += std::string(" ") + argv[i];
  return s;
}

// Writes to --out if given, else stdout.
void emit(const Flags& f, const std::function<void(std::ostream&)>& write) {
  if (!f.out) {
    write(std::cout);
    return;
  }
  std::ofstream file(*f.out);
  if (!file) throw lab::UsageError("cannot open output file " + *f.out);
  write(file);
  if (!file) throw std::runtime_error("failed writing " + *f.out);
}

void emit_table(const Flags& f, const lab::Table& table, const std::string& cmd) {
  const auto format = lab::parse_format(f.format.value_or("csv"));
  emit(f, [&](std::ostream& os) { lab::write_table(os, table, format, {cmd, f.seed.value_or(1)}); });
}

int run_sweep_gap(const Flags& f, const std::string& cmd) {
  lab::GapSweep spec;
  spec.fixed = schedule_params(f);
  spec.omega_a.min = f.omega_min.value_or(spec.omega_a.min);
  spec.omega_a.max = f.omega_max.value_or(spec.omega_a.max);
  spec.omega_a.steps = f.steps.value_or(spec.omega_a.steps);
  spec.jobs = lab::resolve_jobs(f.jobs);
  lab::parse_format(f.format.value_or("csv"));
  emit_table(f, lab::sweep_gap(spec), cmd);
  return kExitOk;
}

int run_sweep_lambda(const Flags& f, const std::string& cmd) {
  lab::LambdaSweep spec;
  spec.fixed = schedule_params(f);
  spec.lambda.min = f.lambda_min.value_or(spec.lambda.min);
  spec.lambda.max = f.lambda_max.value_or(spec.lambda.max);
  spec.lambda.steps = f.steps.value_or(spec.lambda.steps);
  const std::string spacing = f.spacing.value_or("log");
  if (spacing != "log" && spacing != "linear") throw lab::UsageError("--spacing must be log or linear");
  spec.lambda.log_spacing = spacing == "log";
  spec.jobs = lab::resolve_jobs(f.jobs);
  lab::parse_format(f.format.value_or("csv"));
  emit_table(f, lab::sweep_lambda(spec), cmd);
  return kExitOk;
}

int run_region_map(const Flags& f, const std::string& cmd) {
  lab::RegionMap spec;
  spec.fixed = schedule_params(f);
  spec.t_a1.min = f.ta1_min.value_or(spec.t_a1.min);
  spec.t_a1.max = f.ta1_max.value_or(spec.t_a1.max);
  spec.t_a1.steps = f.ta1_steps.value_or(f.steps.value_or(spec.t_a1.steps));
  spec.t_a2.min = f.ta2_min.value_or(spec.t_a2.min);
  spec.t_a2.max = f.ta2_max.value_or(spec.t_a2.max);
  spec.t_a2.steps = f.ta2_steps.value_or(f.steps.value_or(spec.t_a2.steps));
  spec.omega_samples = f.omega_samples.value_or(spec.omega_samples);
  // the fixed schedule only needs a valid BAA order; the A times are scanned
  spec.fixed.t_a1 = spec.t_a1.min;
  spec.fixed.t_a2 = std::max(spec.t_a1.min, spec.t_a2.max);
  spec.jobs = lab::resolve_jobs(f.jobs);
  lab::parse_format(f.format.value_or("csv"));
  emit_table(f, lab::region_map(spec), cmd);
  return kExitOk;
}

int run_verify(const Flags& f, const std::string& suite) {
  const std::size_t trials = f.trials.value_or(lab::default_trials(suite));
  const auto report = lab::run_verify(suite, trials, f.seed.value_or(1), lab::resolve_jobs(f.jobs));
  emit(f, [&](std::ostream& os) { os << lab::to_json(report) << '\n'; });
  if (report.passed) return kExitOk;
  std::cerr << "verify " << suite << ": FAILED, max violation " << lab::format_double(report.max_violation)
            << " exceeds " << lab::format_double(report.tolerance) << "\nreplay: " << report.failing_instance
            << '\n';
  return kExitFailure;
}

int run_toy(const Flags& f, const std::string& name, const std::string& cmd) {
  lab::Table table;
  table.columns = {"circuit", "fidelity", "negativity"};
  bool ok = true, found = false;
  for (const auto& toy : nogo::toy_circuits()) {
    if (!name.empty() && toy.name != name) continue;
    found = true;
    const auto r = nogo::run_toy(toy);
    ok = ok && std::abs(1.0 - r.fidelity) <= 1e-10 && std::abs(r.negativity - 0.5) <= 1e-10;
    table.rows.push_back({r.name, r.fidelity, r.negativity});
  }
  if (!found) {
    std::string names;
    for (const auto& toy : nogo::toy_circuits()) names += " " + toy.name;
    throw lab::UsageError("unknown toy \"" + name + "\"; available:" + names);
  }
  emit_table(f, table, cmd);
  return ok ? kExitOk : kExitFailure;
}

int run_selftest(const Flags& f, bool corrupt) {
  lab::SelftestOptions options;
  options.seed = f.seed.value_or(1);
  options.corrupt_f_convention = corrupt;
  const auto checks = lab::run_selftest(options, [](const lab::SelftestCheck& c) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << std::endl;
  });
  return !checks.empty() && checks.back().passed ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement harvesting lab: delta-coupled detector sweeps and no-go checks"};
  app.set_version_flag("--version", std::string(lab::version()));
  app.require_subcommand(1);

  Flags flags;
  std::string suite, toy_name;
  bool corrupt = false;

  auto* gap = app.add_subcommand("sweep-gap", "negativity and partial-transpose spectrum versus A's gap");
  add_schedule_flags(gap, flags);
  add_output_flags(gap, flags);
  add(gap, "omega-min", flags.omega_min, "first gap (default 0)");
  add(gap, "omega-max", flags.omega_max, "last gap (default 8 pi)");
  add(gap, "steps", flags.steps, "number of gaps (default 401)");

  auto* lam = app.add_subcommand("sweep-lambda", "negativity versus coupling strength");
  add_schedule_flags(lam, flags);
  add_output_flags(lam, flags);
  add(lam, "lambda-min", flags.lambda_min, "smallest strength (default 1e-3)");
  add(lam, "lambda-max", flags.lambda_max, "largest strength (default 4)");
  add(lam, "steps", flags.steps, "number of strengths (default 161)");
  add(lam, "spacing", flags.spacing, "log or linear (default log)");

  auto* region = app.add_subcommand("region-map", "max negativity over A's gap on a (t_a1, t_a2) grid");
  add_schedule_flags(region, flags);
  add_output_flags(region, flags);
  add(region, "ta1-min", flags.ta1_min, "default 0.05");
  add(region, "ta1-max", flags.ta1_max, "default 2.0");
  add(region, "ta2-min", flags.ta2_min, "default 0.05");
  add(region, "ta2-max", flags.ta2_max, "default 2.6");
  add(region, "steps", flags.steps, "points per axis (default 40)");
  add(region, "ta1-steps", flags.ta1_steps, "points along t_a1 (overrides --steps)");
  add(region, "ta2-steps", flags.ta2_steps, "points along t_a2 (overrides --steps)");
  add(region, "omega-samples", flags.omega_samples, "gaps per period in the inner maximum (default 64)");

  auto* verify = app.add_subcommand("verify", "run a no-go property suite; JSON report, exit 1 on violation");
  std::vector<std::string> suite_names(lab::verify_suites().begin(), lab::verify_suites().end());
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names));
  add(verify, "trials", flags.trials, "trial count (nogo_aab: points per grid axis)");
  add_output_flags(verify, flags);

  auto* toy = app.add_subcommand("toy", "run the CNOT toy circuits");
  toy->add_option("name", toy_name, "circuit name (default all)");
  add_output_flags(toy, flags);

  auto* self = app.add_subcommand("selftest", "check the closed forms against independent numerics");
  add(self, "seed", flags.seed, "seed for the random instances (default 1)");
  self->add_flag("--corrupt-f-convention", corrupt)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  const std::string cmd = command_line(argc, argv);
  try {
    apply_config(flags);
    if (gap->parsed()) return run_sweep_gap(flags, cmd);
    if (lam->parsed()) return run_sweep_lambda(flags, cmd);
    if (region->parsed()) return run_region_map(flags, cmd);
    if (verify->parsed()) return run_verify(flags, suite);
    if (toy->parsed()) return run_toy(flags, toy_name, cmd);
    return run_selftest(flags, corrupt);
  } catch (const lab::UsageError& e) {
    std::cerr << "harvest-lab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "harvest-lab: error: " << e.what() << '\n';
    return kExitFailure;
  }
}
