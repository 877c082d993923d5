#pragma once

// Experiment configuration in physical units, its normalization, the N-sweep
// runner and the validation battery.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cell.hpp"
#include "channel.hpp"
#include "demand.hpp"
#include "error.hpp"
#include "format.hpp"
#include "optimizer.hpp"
#include "payoff.hpp"
#include "random.hpp"
#include "revenue_bound.hpp"
#include "schedule.hpp"
#include "scheduler.hpp"

namespace cbcast {

struct ExperimentSpec {
  std::string name = "experiment";

  // [cell]
  double bandwidth_mhz = 10.0;
  double uc_grant_mhz = 2.5;
  double interval_seconds = 120.0;
  std::size_t slots_per_interval = 120;
  double rate_high = 2.4;  // bps/Hz
  double rate_low = 1.32;  // bps/Hz
  double area_ratio = 9.0; // |A_l| / |A_h|
  double bc_cap_fraction = 0.6;
  std::size_t users = 200;

  // [catalog]
  std::size_t files = 2000;
  double zipf_exponent = 1.0;
  double size_min_mb = 160.0;
  double size_max_mb = 634.0;
  double size_unit_mb = 0.0; // 0: size_max_mb / 0.99
  double delay_min_s = 0.6;
  double delay_max_s = 6.0;
  std::size_t theta_samples = 20000;
  std::uint64_t catalog_seed = 1;

  // [pricing]
  double unicast_price = 2.6;

  // [sweep]
  std::size_t users_min = 0;
  std::size_t users_max = 200;
  std::size_t users_step = 10;
  std::vector<double> zipf_exponents;      // empty: {zipf_exponent}
  std::vector<std::size_t> catalog_sizes;  // empty: {files}
  std::vector<SchedulerVariant> schedulers{SchedulerVariant::suboptimal};

  // [simulation]
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  bool reject_nonpositive_payoff = false;

  // [validate]
  std::size_t validation_files = 8;
  std::uint64_t validation_seed = 42;

  void validate() const {
    auto positive = [](double v, const char* what) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string(what) + " must be positive");
    };
    positive(bandwidth_mhz, "cell.bandwidth_mhz");
    positive(uc_grant_mhz, "cell.uc_grant_mhz");
    positive(interval_seconds, "cell.interval_seconds");
    positive(rate_high, "cell.r_high");
    positive(rate_low, "cell.r_low");
    positive(area_ratio, "cell.area_ratio");
    positive(size_min_mb, "catalog.size_min_mb");
    positive(size_max_mb, "catalog.size_max_mb");
    positive(delay_min_s, "catalog.delay_min_s");
    positive(delay_max_s, "catalog.delay_max_s");
    positive(unicast_price, "pricing.unicast_price");
    if (slots_per_interval < 1)
      throw ConfigError("cell.slots_per_interval must be at least 1");
    if (rate_low > rate_high)
      throw ConfigError("cell.r_low must not exceed cell.r_high");
    if (!(bc_cap_fraction > 0.0 && bc_cap_fraction <= 1.0))
      throw ConfigError("cell.bc_cap_fraction must lie in (0, 1]");
    if (files < 1)
      throw ConfigError("catalog.files must be at least 1");
    positive(zipf_exponent, "catalog.zipf_exponent");
    if (size_min_mb > size_max_mb)
      throw ConfigError("catalog.size_min_mb must not exceed catalog.size_max_mb");
    if (delay_min_s > delay_max_s)
      throw ConfigError("catalog.delay_min_s must not exceed catalog.delay_max_s");
    if (size_unit_mb < 0.0)
      throw ConfigError("catalog.size_unit_mb must be non-negative");
    if (theta_samples < 1)
      throw ConfigError("catalog.theta_samples must be at least 1");
    if (users_step < 1)
      throw ConfigError("sweep.users_step must be at least 1");
    if (users_min > users_max)
      throw ConfigError("sweep range is empty");
    for (double g : zipf_exponents)
      positive(g, "sweep.zipf_exponents");
    for (std::size_t m : catalog_sizes)
      if (m < 1)
        throw ConfigError("sweep.catalog_sizes entries must be at least 1");
    if (schedulers.empty())
      throw ConfigError("sweep.schedulers must not be empty");
    if (trials < 1)
      throw ConfigError("simulation.trials must be at least 1");
    if (validation_files < 1 || validation_files > 8)
      throw ConfigError("validate.files must lie in [1, 8]");
  }

  std::vector<std::size_t> sweep_users() const {
    std::vector<std::size_t> n;
    for (std::size_t v = users_min; v <= users_max; v += users_step)
      n.push_back(v);
    return n;
  }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(", "), boost::token_compress_on);
  std::erase_if(parts, [](const std::string& s) { return s.empty(); });
  return parts;
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T value{};
  if constexpr (std::is_same_v<T, bool>) {
    std::string t = boost::algorithm::to_lower_copy(text);
    if (t == "true" || t == "1" || t == "yes")
      return true;
    if (t == "false" || t == "0" || t == "no")
      return false;
    throw ConfigError("'" + key + "': expected a boolean, got '" + text + "'");
  } else {
    if (!text.empty() && text.front() == '-' && std::is_unsigned_v<T>)
      throw ConfigError("'" + key + "': expected a non-negative integer, got '" + text + "'");
    is >> value;
    if (!is || !(is >> std::ws).eof())
      throw ConfigError("'" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

} // namespace detail

// Sectioned key = value text; unknown sections or keys are rejected.
inline ExperimentSpec parse_spec(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }

  ExperimentSpec spec;
  std::optional<double> degradation;
  bool has_rate_low = false;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto set = [](auto& field) -> Setter {
    return [&field](const std::string& key, const std::string& text) {
      field = detail::parse_value<std::remove_reference_t<decltype(field)>>(key, text);
    };
  };
  std::map<std::string, std::map<std::string, Setter>> keys;
  keys["scenario"]["name"] = [&](const std::string&, const std::string& t) { spec.name = t; };
  auto& cell = keys["cell"];
  cell["bandwidth_mhz"] = set(spec.bandwidth_mhz);
  cell["uc_grant_mhz"] = set(spec.uc_grant_mhz);
  cell["interval_seconds"] = set(spec.interval_seconds);
  cell["slots_per_interval"] = set(spec.slots_per_interval);
  cell["r_high"] = set(spec.rate_high);
  cell["r_low"] = [&](const std::string& k, const std::string& t) {
    spec.rate_low = detail::parse_value<double>(k, t);
    has_rate_low = true;
  };
  cell["degradation"] = [&](const std::string& k, const std::string& t) {
    degradation = detail::parse_value<double>(k, t);
  };
  cell["area_ratio"] = set(spec.area_ratio);
  cell["bc_cap_fraction"] = set(spec.bc_cap_fraction);
  cell["users"] = set(spec.users);
  auto& cat = keys["catalog"];
  cat["files"] = set(spec.files);
  cat["zipf_exponent"] = set(spec.zipf_exponent);
  cat["size_min_mb"] = set(spec.size_min_mb);
  cat["size_max_mb"] = set(spec.size_max_mb);
  cat["size_unit_mb"] = set(spec.size_unit_mb);
  cat["delay_min_s"] = set(spec.delay_min_s);
  cat["delay_max_s"] = set(spec.delay_max_s);
  cat["theta_samples"] = set(spec.theta_samples);
  cat["seed"] = set(spec.catalog_seed);
  keys["pricing"]["unicast_price"] = set(spec.unicast_price);
  auto& sweep = keys["sweep"];
  sweep["users_min"] = set(spec.users_min);
  sweep["users_max"] = set(spec.users_max);
  sweep["users_step"] = set(spec.users_step);
  sweep["zipf_exponents"] = [&](const std::string& k, const std::string& t) {
    spec.zipf_exponents.clear();
    for (const auto& s : detail::split_list(t))
      spec.zipf_exponents.push_back(detail::parse_value<double>(k, s));
  };
  sweep["catalog_sizes"] = [&](const std::string& k, const std::string& t) {
    spec.catalog_sizes.clear();
    for (const auto& s : detail::split_list(t))
      spec.catalog_sizes.push_back(detail::parse_value<std::size_t>(k, s));
  };
  sweep["schedulers"] = [&](const std::string& k, const std::string& t) {
    spec.schedulers.clear();
    for (const auto& s : detail::split_list(t)) {
      try {
        spec.schedulers.push_back(parse_scheduler_variant(s));
      } catch (const InvalidParameter& e) {
        throw ConfigError("'" + k + "': " + e.what());
      }
    }
  };
  auto& sim = keys["simulation"];
  sim["trials"] = set(spec.trials);
  sim["seed"] = set(spec.seed);
  sim["reject_nonpositive_payoff"] = set(spec.reject_nonpositive_payoff);
  keys["validate"]["files"] = set(spec.validation_files);
  keys["validate"]["seed"] = set(spec.validation_seed);

  for (const auto& [section, body] : tree) {
    auto sec = keys.find(section);
    if (sec == keys.end()) {
      if (body.empty())
        throw ConfigError("key '" + section + "' outside any section");
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      auto it = sec->second.find(key);
      if (it == sec->second.end())
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      it->second(section + "." + key, boost::algorithm::trim_copy(value.data()));
    }
  }

  if (degradation) {
    if (has_rate_low)
      throw ConfigError("give either cell.r_low or cell.degradation, not both");
    if (!(*degradation >= 0.0 && *degradation < 1.0))
      throw ConfigError("cell.degradation must lie in [0, 1)");
    spec.rate_low = spec.rate_high * (1.0 - *degradation);
  }
  spec.validate();
  return spec;
}

inline ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config '" + path + "'");
  return parse_spec(in);
}

// Physical-to-model unit mapping. Bandwidth is counted in unicast grants, time
// in slots of interval/slots seconds, sizes in size_unit_mb. A spectral
// efficiency of e bps/Hz then moves e * rate_scale size units per slot per
// bandwidth unit.
struct NormalizationScheme {
  double frequency_unit_mhz = 0.0;
  double slot_seconds = 0.0;
  double size_unit_mb = 0.0;
  double rate_scale = 0.0;

  double bandwidth_mhz(double normalized) const noexcept { return normalized * frequency_unit_mhz; }
  double size_mb(double normalized) const noexcept { return normalized * size_unit_mb; }
  double seconds(double slots) const noexcept { return slots * slot_seconds; }
};

struct Scenario {
  FileCatalog catalog;
  CellConfig cell;
  NormalizationScheme scheme;
};

inline NormalizationScheme normalization_scheme(const ExperimentSpec& spec) {
  NormalizationScheme s;
  s.frequency_unit_mhz = spec.uc_grant_mhz;
  s.slot_seconds = spec.interval_seconds / static_cast<double>(spec.slots_per_interval);
  s.size_unit_mb = spec.size_unit_mb > 0.0 ? spec.size_unit_mb : spec.size_max_mb / 0.99;
  s.rate_scale = s.frequency_unit_mhz * s.slot_seconds / (8.0 * s.size_unit_mb);
  return s;
}

inline CellConfig normalized_cell(const ExperimentSpec& spec, const NormalizationScheme& scheme) {
  CellConfig cell;
  cell.bandwidth = spec.bandwidth_mhz / scheme.frequency_unit_mhz;
  cell.slots = static_cast<double>(spec.slots_per_interval);
  cell.users = spec.users;
  cell.unicast_price = spec.unicast_price;
  cell.rates = RateModel{spec.rate_high * scheme.rate_scale, spec.rate_low * scheme.rate_scale,
                         prob_high_from_area_ratio(spec.area_ratio)};
  cell.bc_cap_fraction = spec.bc_cap_fraction;
  try {
    cell.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("normalized cell: ") + e.what());
  }
  return cell;
}

// File sizes are drawn per rank, uniform in [size_min_mb, size_max_mb], from
// one stream of catalog_seed, so a larger catalog extends a smaller one.
inline std::vector<double> file_sizes_mb(const ExperimentSpec& spec, std::size_t files) {
  Engine engine = make_engine(spec.catalog_seed, 0);
  std::vector<double> sizes(files);
  for (auto& s : sizes)
    s = draw_uniform(engine, spec.size_min_mb, spec.size_max_mb);
  return sizes;
}

inline Scenario normalize(const ExperimentSpec& spec, std::optional<double> zipf_exponent = std::nullopt,
                          std::optional<std::size_t> files = std::nullopt) {
  spec.validate();
  Scenario sc;
  sc.scheme = normalization_scheme(spec);
  sc.cell = normalized_cell(spec, sc.scheme);

  const std::size_t m = files.value_or(spec.files);
  if (m < 1)
    throw ConfigError("catalog needs at least one file");
  const DelayRange delay{spec.delay_min_s / sc.scheme.slot_seconds, spec.delay_max_s / sc.scheme.slot_seconds};
  std::vector<FileSpec> specs;
  specs.reserve(m);
  for (double mb : file_sizes_mb(spec, m)) {
    const double f = mb / sc.scheme.size_unit_mb;
    if (!(f < 1.0)) {
      std::ostringstream os;
      os << "file of " << mb << " MB normalizes to f = " << f << " >= 1; raise catalog.size_unit_mb";
      throw ConfigError(os.str());
    }
    specs.push_back({f, delay});
  }
  try {
    sc.catalog = FileCatalog::build(std::move(specs), zipf_exponent.value_or(spec.zipf_exponent), sc.cell.rates,
                                    {spec.theta_samples, derive_seed(spec.catalog_seed, 1)});
  } catch (const PreconditionViolation& e) {
    throw ConfigError(std::string("catalog violates delay sensitivity: ") + e.what());
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("catalog: ") + e.what());
  }
  return sc;
}

inline Scenario with_users(Scenario sc, std::size_t users) {
  sc.cell.users = users;
  return sc;
}

// ---------------------------------------------------------------------------
// Sweep

struct SweepRow {
  double zipf_exponent = 0.0;
  std::size_t catalog_size = 0;
  SchedulerVariant scheduler = SchedulerVariant::suboptimal;
  std::size_t users = 0;

  double bandwidth_star = nan();   // closed-form W_b*
  double price_star = nan();       // closed-form P_b*
  double bandwidth_star_mhz = nan();
  double bound = nan();            // L at the closed forms
  double gain_analytic = nan();    // R from the gain expression
  double mc_mean = nan();          // L0
  double mc_stderr = nan();
  double gain_mc = nan();
  double bc_user_fraction = nan();
  double bandwidth_exact = nan();
  double price_exact = nan();
  double bound_exact = nan();
  double gain_exact = nan();
  std::string error;

  static double nan() { return std::numeric_limits<double>::quiet_NaN(); }
};

struct SweepOptions {
  bool simulate = true;
  bool exact = true;
};

inline SweepRow sweep_point(const Scenario& base, SchedulerVariant variant, std::size_t users, double zipf_exponent,
                            const ExperimentSpec& spec, const SweepOptions& options = {}) {
  SweepRow row;
  row.zipf_exponent = zipf_exponent;
  row.catalog_size = base.catalog.size();
  row.scheduler = variant;
  row.users = users;
  try {
    const Scenario sc = with_users(base, users);
    const auto& cat = sc.catalog;
    const auto& cell = sc.cell;
    const Schedule schedule = variant_schedule(variant, cat, cell);
    const double mass = bound_moments(cat, schedule).delay_mass;
    row.bandwidth_star = closed_form_bandwidth(cat, cell);
    row.bandwidth_star_mhz = sc.scheme.bandwidth_mhz(row.bandwidth_star);
    row.price_star = closed_form_price(cat, cell, mass);
    row.bound = bound_value(cat, cell, row.price_star, row.bandwidth_star, schedule);
    row.gain_analytic = revenue_gain(cat, cell, mass, schedule);
    if (options.simulate) {
      const auto report =
          simulate_revenue(cat, cell, {cell.unicast_price, row.price_star}, row.bandwidth_star, schedule, spec.trials,
                           derive_seed(spec.seed, users), {spec.reject_nonpositive_payoff});
      row.mc_mean = report.revenue_mean;
      row.mc_stderr = report.revenue_stderr;
      row.gain_mc = report.revenue_mean / cell.unicast_only_revenue();
      row.bc_user_fraction = report.bc_user_fraction;
    }
    if (options.exact) {
      const auto opt = joint_optimize(cat, cell);
      row.bandwidth_exact = opt.broadcast_bandwidth;
      row.price_exact = opt.broadcast_price;
      row.bound_exact = opt.lower_bound;
      row.gain_exact = opt.bound_gain;
    }
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

// Rows ordered by (zipf exponent, catalog size, scheduler, N).
inline std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, const SweepOptions& options = {}) {
  spec.validate();
  const auto gammas = spec.zipf_exponents.empty() ? std::vector<double>{spec.zipf_exponent} : spec.zipf_exponents;
  const auto sizes = spec.catalog_sizes.empty() ? std::vector<std::size_t>{spec.files} : spec.catalog_sizes;
  std::vector<SweepRow> rows;
  for (double g : gammas)
    for (std::size_t m : sizes) {
      const Scenario base = normalize(spec, g, m);
      for (auto variant : spec.schedulers)
        for (std::size_t n : spec.sweep_users())
          rows.push_back(sweep_point(base, variant, n, g, spec, options));
    }
  return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "N,W_b_star,P_b_star,L,R_analytic,L0_mc_mean,L0_mc_stderr,gain_mc,scheduler_variant,"
         "zipf_exponent,catalog_size,W_b_star_mhz,bc_user_fraction,W_b_exact,P_b_exact,L_exact,gain_exact,error\n";
  auto quote = [](const std::string& s) {
    if (s.empty())
      return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"')
        q += '"';
      q += c;
    }
    return q + '"';
  };
  for (const auto& r : rows) {
    out << r.users << ',' << format_number(r.bandwidth_star) << ',' << format_number(r.price_star) << ','
        << format_number(r.bound) << ',' << format_number(r.gain_analytic) << ',' << format_number(r.mc_mean) << ','
        << format_number(r.mc_stderr) << ',' << format_number(r.gain_mc) << ',' << to_string(r.scheduler) << ','
        << format_number(r.zipf_exponent) << ',' << r.catalog_size << ',' << format_number(r.bandwidth_star_mhz)
        << ',' << format_number(r.bc_user_fraction) << ',' << format_number(r.bandwidth_exact) << ','
        << format_number(r.price_exact) << ',' << format_number(r.bound_exact) << ','
        << format_number(r.gain_exact) << ',' << quote(r.error) << '\n';
  }
}

// Plot-ready long format: one (series, N, metric, value) record per line.
inline void write_sweep_long(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "series,N,metric,value\n";
  for (const auto& r : rows) {
    std::ostringstream series;
    series << "gamma=" << format_number(r.zipf_exponent) << ";M=" << r.catalog_size
           << ";scheduler=" << to_string(r.scheduler);
    const std::pair<const char*, double> metrics[] = {{"R_analytic", r.gain_analytic}, {"gain_mc", r.gain_mc},
                                                      {"gain_exact", r.gain_exact},    {"W_b_star", r.bandwidth_star},
                                                      {"P_b_star", r.price_star},      {"W_b_exact", r.bandwidth_exact},
                                                      {"P_b_exact", r.price_exact}};
    for (const auto& [name, value] : metrics)
      out << series.str() << ',' << r.users << ',' << name << ',' << format_number(value) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Validation battery

enum class CheckStatus { pass, fail, skipped };

inline std::string_view to_string(CheckStatus s) {
  switch (s) {
  case CheckStatus::pass:
    return "PASS";
  case CheckStatus::fail:
    return "FAIL";
  case CheckStatus::skipped:
    return "SKIPPED";
  }
  return "UNKNOWN";
}

struct ValidationCheck {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double measured = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const {
    return std::none_of(checks.begin(), checks.end(),
                        [](const ValidationCheck& c) { return c.status == CheckStatus::fail; });
  }
};

// Minimum of the scheduling objective over every permutation.
inline double brute_force_min_cost(const FileCatalog& catalog, double unicast_price, double broadcast_price) {
  std::vector<std::size_t> order(catalog.size());
  std::iota(order.begin(), order.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, smith_cost(order, catalog, unicast_price, broadcast_price));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// Argmax of g over `points` evenly spaced values in [lo, hi].
template <class Fn>
double grid_argmax(Fn&& g, double lo, double hi, std::size_t points = 10000) {
  double best_x = lo;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points; ++k) {
    const double x = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    const double v = g(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

inline ValidationReport run_validation(const ExperimentSpec& spec) {
  spec.validate();
  ValidationReport report;
  auto add = [&](std::string name, bool ok, double measured, std::string detail) {
    report.checks.push_back({std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, measured, std::move(detail)});
  };

  // Permutation oracle on a small catalog drawn from the configured physical ranges.
  {
    ExperimentSpec small = spec;
    small.catalog_seed = spec.validation_seed;
    const Scenario sc = normalize(small, std::nullopt, spec.validation_files);
    const double pu = sc.cell.unicast_price;
    for (double pb : {pu, std::max(bound_price_floor(sc.catalog, sc.cell), pu / 2.0)}) {
      const auto smith = smith_schedule(sc.catalog, pu, pb);
      const double cost = smith_cost(smith.order, sc.catalog, pu, pb);
      const double best = brute_force_min_cost(sc.catalog, pu, pb);
      std::ostringstream os;
      os << "M=" << sc.catalog.size() << " P_b=" << format_number(pb) << " smith=" << format_number(cost)
         << " min=" << format_number(best);
      add("smith_vs_permutations", cost <= best, cost - best, os.str());
    }
    const auto opt = optimal_schedule(sc.catalog, sc.cell);
    const auto resorted = order_by_weight(opt.weights);
    add("optimal_schedule_fixed_point", opt.converged && resorted == opt.schedule.order,
        static_cast<double>(opt.iterations), opt.converged ? "order reproduces itself" : "did not converge");
  }

  const Scenario sc = normalize(spec);
  const auto& cat = sc.catalog;
  const auto& cell = sc.cell;

  OptimizationResult opt;
  try {
    opt = joint_optimize(cat, cell);
  } catch (const ConvergenceError& e) {
    add("joint_optimize_converges", false, static_cast<double>(e.trace().size()), e.what());
    return report;
  }
  add("joint_optimize_converges", true, static_cast<double>(opt.iterations), "iterations");

  if (cell.users > 0 && !(opt.broadcast_bandwidth > 0.0)) {
    report.checks.push_back({"fixed_point_equations", CheckStatus::skipped, opt.lower_bound,
                             "no broadcast beats every interior point; optimum is W_b = 0"});
  } else if (cell.users > 0) {
    const double w_fix = exact_bandwidth_given_price(cat, cell, opt.broadcast_price, opt.schedule);
    const double p_fix = exact_price_given_bandwidth(cat, cell, opt.broadcast_bandwidth, opt.schedule,
                                                     bound_price_floor(cat, cell));
    const double d = std::max(std::abs(w_fix - opt.broadcast_bandwidth), std::abs(p_fix - opt.broadcast_price));
    add("fixed_point_equations", d <= 1e-9, d, "max |coordinate optimum - iterate|");

    const double floor = bound_price_floor(cat, cell);
    const double w_grid = grid_argmax(
        [&](double w) { return bound_value(cat, cell, opt.broadcast_price, w, opt.schedule); },
        cell.broadcast_cap() / 1e4, cell.broadcast_cap());
    const double p_grid = grid_argmax(
        [&](double p) { return bound_value(cat, cell, p, opt.broadcast_bandwidth, opt.schedule); }, floor,
        cell.unicast_price);
    const double w_step = cell.broadcast_cap() / 1e4;
    const double p_step = (cell.unicast_price - floor) / 1e4;
    const double dw = std::abs(w_grid - opt.broadcast_bandwidth);
    const double dp = std::abs(p_grid - opt.broadcast_price);
    add("exact_bandwidth_vs_grid", dw <= 2.0 * w_step, dw, "grid step " + format_number(w_step));
    add("exact_price_vs_grid", dp <= 2.0 * p_step, dp, "grid step " + format_number(p_step));

    const double cf_bound = bound_value(cat, cell, std::max(opt.closed_form_price, floor), opt.closed_form_bandwidth,
                                        suboptimal_schedule(cat, cell.unicast_price));
    add("exact_dominates_closed_form", opt.lower_bound >= cf_bound, opt.lower_bound - cf_bound,
        "L(exact) - L(closed forms)");
  }

  auto lower_bound_check = [&](const std::string& name, double pb, double wb, const Schedule& schedule) {
    const auto bad = bound_hypothesis_violations(cat, cell.unicast_price, pb);
    if (!bad.empty()) {
      report.checks.push_back({name, CheckStatus::skipped, static_cast<double>(bad.size()),
                               "(P_u - P_b) f_i < 1 fails for " + std::to_string(bad.size()) + " file(s)"});
      return;
    }
    const double bound = wb > 0.0 ? lower_bound_revenue(cat, cell, pb, wb, schedule) : cell.unicast_only_revenue();
    const auto sim = simulate_revenue(cat, cell, {cell.unicast_price, pb}, wb, schedule, spec.trials, spec.seed,
                                      {spec.reject_nonpositive_payoff});
    const double margin = sim.revenue_mean - (bound - 3.0 * sim.revenue_stderr);
    std::ostringstream os;
    os << "L0=" << format_number(sim.revenue_mean) << " se=" << format_number(sim.revenue_stderr)
       << " L=" << format_number(bound);
    add(name, margin >= 0.0, margin, os.str());
    add(name + "_payoff_guarantee", sim.payoff_guarantee_violations == 0,
        static_cast<double>(sim.payoff_guarantee_violations), "users paid below their unicast payoff");
  };
  lower_bound_check("lower_bound_at_closed_form", opt.closed_form_price, opt.closed_form_bandwidth,
                    suboptimal_schedule(cat, cell.unicast_price));
  lower_bound_check("lower_bound_at_optimum", opt.broadcast_price, opt.broadcast_bandwidth, opt.schedule);
  return report;
}

inline void write_validation(const ValidationReport& report, std::ostream& out) {
  for (const auto& c : report.checks)
    out << to_string(c.status) << ' ' << c.name << " measured=" << format_number(c.measured) << ' ' << c.detail
        << '\n';
}

} // namespace cbcast
