// cbcast: optimize, sweep, simulate, schedule and validate broadcast/unicast
// revenue scenarios described by a config file.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cbcast/cbcast.hpp>
#include <cbcast/json.hpp>

namespace {

enum ExitCode { ok = 0, config_error = 1, check_failed = 2, convergence_error = 3, runtime_error = 4 };

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheduler;
  std::optional<double> beta;
  std::string format = "json";
};

cbcast::ExperimentSpec load(const std::string& path, const Common& common) {
  auto spec = cbcast::load_spec(path);
  if (common.seed)
    spec.seed = *common.seed;
  if (common.beta)
    spec.bc_cap_fraction = *common.beta;
  if (common.scheduler) {
    try {
      spec.schedulers = {cbcast::parse_scheduler_variant(*common.scheduler)};
    } catch (const cbcast::InvalidParameter& e) {
      throw cbcast::ConfigError(e.what());
    }
  }
  spec.validate();
  return spec;
}

void print_kv(const nlohmann::ordered_json& j, std::ostream& out) {
  out << "key,value\n";
  for (const auto& [k, v] : j.items())
    if (!v.is_structured())
      out << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
}

int run_optimize(const std::string& path, const Common& common, std::optional<std::size_t> users) {
  auto spec = load(path, common);
  if (users)
    spec.users = *users;
  const auto sc = cbcast::normalize(spec);
  const auto result = cbcast::joint_optimize(sc.catalog, sc.cell);
  nlohmann::ordered_json j = cbcast::to_json(result);
  j["W_b_star_mhz"] = sc.scheme.bandwidth_mhz(result.broadcast_bandwidth);
  j["cell"] = cbcast::to_json(sc.cell);
  j["normalization"] = cbcast::to_json(sc.scheme);
  if (common.format == "csv")
    print_kv(j, std::cout);
  else
    std::cout << j.dump(2) << '\n';
  return ok;
}

int run_sweep(const std::string& path, const Common& common, const std::string& output,
              const std::string& long_output, bool simulate) {
  const auto spec = load(path, common);
  cbcast::SweepOptions options;
  options.simulate = simulate;
  const auto rows = cbcast::run_sweep(spec, options);

  std::size_t failed = 0;
  for (const auto& r : rows)
    if (!r.error.empty()) {
      ++failed;
      std::cerr << "warning: N=" << r.users << " (" << cbcast::to_string(r.scheduler) << "): " << r.error << '\n';
    }

  auto emit = [&](std::ostream& out) {
    if (common.format == "json") {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& r : rows)
        arr.push_back({{"N", r.users},
                       {"W_b_star", r.bandwidth_star},
                       {"P_b_star", r.price_star},
                       {"L", r.bound},
                       {"R_analytic", r.gain_analytic},
                       {"L0_mc_mean", r.mc_mean},
                       {"L0_mc_stderr", r.mc_stderr},
                       {"gain_mc", r.gain_mc},
                       {"scheduler_variant", std::string(cbcast::to_string(r.scheduler))},
                       {"zipf_exponent", r.zipf_exponent},
                       {"catalog_size", r.catalog_size},
                       {"W_b_star_mhz", r.bandwidth_star_mhz},
                       {"bc_user_fraction", r.bc_user_fraction},
                       {"W_b_exact", r.bandwidth_exact},
                       {"P_b_exact", r.price_exact},
                       {"L_exact", r.bound_exact},
                       {"gain_exact", r.gain_exact},
                       {"error", r.error}});
      out << arr.dump(2) << '\n';
    } else {
      cbcast::write_sweep_csv(rows, out);
    }
  };
  if (output.empty() || output == "-") {
    emit(std::cout);
  } else {
    std::ofstream out(output);
    if (!out)
      throw cbcast::ConfigError("cannot write '" + output + "'");
    emit(out);
  }
  if (!long_output.empty()) {
    std::ofstream out(long_output);
    if (!out)
      throw cbcast::ConfigError("cannot write '" + long_output + "'");
    cbcast::write_sweep_long(rows, out);
  }
  return failed == rows.size() ? runtime_error : ok;
}

int run_simulate(const std::string& path, const Common& common, std::optional<std::size_t> trials,
                 std::optional<std::size_t> users, const std::string& at) {
  auto spec = load(path, common);
  if (trials)
    spec.trials = *trials;
  if (users)
    spec.users = *users;
  spec.validate();
  const auto sc = cbcast::normalize(spec);
  const auto& cat = sc.catalog;
  const auto& cell = sc.cell;
  const auto variant = spec.schedulers.front();

  double wb = 0.0;
  double pb = 0.0;
  cbcast::Schedule schedule;
  if (at == "optimum") {
    const auto opt = cbcast::joint_optimize(cat, cell);
    wb = opt.broadcast_bandwidth;
    pb = opt.broadcast_price;
    schedule = opt.schedule;
  } else {
    schedule = cbcast::variant_schedule(variant, cat, cell);
    wb = cbcast::closed_form_bandwidth(cat, cell);
    pb = cbcast::closed_form_price(cat, cell, cbcast::bound_moments(cat, schedule).delay_mass);
  }
  const auto report = cbcast::simulate_revenue(cat, cell, {cell.unicast_price, pb}, wb, schedule, spec.trials,
                                               spec.seed, {spec.reject_nonpositive_payoff});
  if (report.uc_underloaded_trials > 0)
    std::cerr << "warning: unicast demand fell below unicast capacity in " << report.uc_underloaded_trials
              << " trial(s); the fixed unicast revenue term overstates those trials\n";

  nlohmann::ordered_json j = cbcast::to_json(report);
  j["operating_point"] = {{"at", at},
                          {"scheduler", at == "optimum" ? "joint" : std::string(cbcast::to_string(variant))},
                          {"W_b", wb},
                          {"W_b_mhz", sc.scheme.bandwidth_mhz(wb)},
                          {"P_b", pb},
                          {"L", cbcast::bound_value(cat, cell, pb, wb, schedule)},
                          {"bound_hypothesis_holds", cbcast::bound_hypothesis_holds(cat, cell.unicast_price, pb)},
                          {"unicast_only_revenue", cell.unicast_only_revenue()}};
  if (common.format == "csv")
    print_kv(j, std::cout);
  else
    std::cout << j.dump(2) << '\n';
  return ok;
}

int run_schedule(const std::string& path, const Common& common) {
  const auto spec = load(path, common);
  const auto sc = cbcast::normalize(spec);
  const auto variant = spec.schedulers.front();
  const auto schedule = cbcast::variant_schedule(variant, sc.catalog, sc.cell);
  const auto weights = cbcast::variant_weights(variant, sc.catalog, sc.cell);
  if (common.format == "json") {
    nlohmann::ordered_json j = cbcast::to_json(schedule);
    j["scheduler"] = std::string(cbcast::to_string(variant));
    j["weights"] = weights;
    std::cout << j.dump(2) << '\n';
  } else {
    cbcast::write_schedule_csv(schedule, sc.catalog, weights, std::cout);
  }
  return ok;
}

int run_catalog(const std::string& path, const Common& common) {
  const auto spec = load(path, common);
  cbcast::write_catalog_csv(cbcast::normalize(spec).catalog, std::cout);
  return ok;
}

int run_validate(const std::string& path, const Common& common) {
  const auto spec = load(path, common);
  const auto report = cbcast::run_validation(spec);
  if (common.format == "json")
    std::cout << cbcast::to_json(report).dump(2) << '\n';
  else
    cbcast::write_validation(report, std::cout);
  return report.passed() ? ok : check_failed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Broadcast/unicast revenue optimization"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--seed", common.seed, "Simulation seed");
  app.add_option("--scheduler", common.scheduler, "Scheduler variant")
      ->check(CLI::IsMember({"optimal", "suboptimal", "none"}));
  app.add_option("--beta", common.beta, "Broadcast bandwidth cap as a fraction of W");
  std::optional<std::string> format;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  std::string config;
  std::optional<std::size_t> users;
  std::optional<std::size_t> trials;
  std::string output;
  std::string long_output;
  bool no_simulate = false;
  std::string at = "optimum";

  auto* optimize = app.add_subcommand("optimize", "Joint optimum for one N, as JSON");
  optimize->add_option("config", config)->required()->check(CLI::ExistingFile);
  optimize->add_option("--users", users, "Override the number of users N");

  auto* sweep = app.add_subcommand("sweep", "N-sweep table");
  sweep->add_option("config", config)->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--output", output, "Output file (default stdout)");
  sweep->add_option("--long", long_output, "Also write a plot-ready long-format CSV");
  sweep->add_flag("--no-simulate", no_simulate, "Skip the Monte Carlo columns");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo revenue under the selection policy");
  simulate->add_option("config", config)->required()->check(CLI::ExistingFile);
  simulate->add_option("--trials", trials, "Number of trials");
  simulate->add_option("--users", users, "Override the number of users N");
  simulate->add_option("--at", at, "Operating point")->check(CLI::IsMember({"optimum", "closed-form"}));

  auto* schedule = app.add_subcommand("schedule", "Broadcast queue as CSV");
  schedule->add_option("config", config)->required()->check(CLI::ExistingFile);

  auto* catalog = app.add_subcommand("catalog", "Normalized catalog as CSV");
  catalog->add_option("config", config)->required()->check(CLI::ExistingFile);

  auto* validate = app.add_subcommand("validate", "Oracle battery; exit 2 if any check fails");
  validate->add_option("config", config)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*optimize) {
      common.format = format.value_or("json");
      return run_optimize(config, common, users);
    }
    if (*sweep) {
      common.format = format.value_or("csv");
      return run_sweep(config, common, output, long_output, !no_simulate);
    }
    if (*simulate) {
      common.format = format.value_or("json");
      return run_simulate(config, common, trials, users, at);
    }
    if (*schedule) {
      common.format = format.value_or("csv");
      return run_schedule(config, common);
    }
    if (*catalog) {
      common.format = format.value_or("csv");
      return run_catalog(config, common);
    }
    if (*validate) {
      common.format = format.value_or("csv");
      return run_validate(config, common);
    }
  } catch (const cbcast::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const cbcast::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << '\n';
    return convergence_error;
  } catch (const cbcast::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return runtime_error;
  }
  return ok;
}
