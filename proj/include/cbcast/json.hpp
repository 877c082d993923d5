#pragma once

// JSON renderings of results for the command-line tool.

#include <nlohmann/json.hpp>

#include "optimizer.hpp"
#include "payoff.hpp"
#include "scenario.hpp"

namespace cbcast {

inline nlohmann::ordered_json to_json(const NormalizationScheme& s) {
  return {{"frequency_unit_mhz", s.frequency_unit_mhz},
          {"slot_seconds", s.slot_seconds},
          {"size_unit_mb", s.size_unit_mb},
          {"rate_scale", s.rate_scale}};
}

inline nlohmann::ordered_json to_json(const CellConfig& c) {
  return {{"bandwidth", c.bandwidth},
          {"slots", c.slots},
          {"users", c.users},
          {"unicast_price", c.unicast_price},
          {"rate_high", c.rates.high},
          {"rate_low", c.rates.low},
          {"prob_high", c.rates.prob_high},
          {"bc_cap_fraction", c.bc_cap_fraction}};
}

// File indices are 1-based, as in every other output.
inline nlohmann::ordered_json to_json(const Schedule& s) {
  std::vector<std::size_t> order;
  order.reserve(s.order.size());
  for (auto i : s.order)
    order.push_back(i + 1);
  return {{"order", order}, {"completion", s.completion}};
}

inline nlohmann::ordered_json to_json(const OptimizationResult& r) {
  nlohmann::ordered_json trace = nlohmann::ordered_json::array();
  for (const auto& t : r.trace)
    trace.push_back({{"W_b", t.broadcast_bandwidth}, {"P_b", t.broadcast_price}, {"L", t.bound}});
  return {{"W_b_star", r.broadcast_bandwidth},
          {"P_b_star", r.broadcast_price},
          {"S_star", r.delay_mass},
          {"G", r.gain_offset},
          {"L", r.lower_bound},
          {"R_analytic", r.gain},
          {"R_bound", r.bound_gain},
          {"bound_hypothesis_holds", r.bound_hypothesis_holds},
          {"iterations", r.iterations},
          {"closed_form_W_b", r.closed_form_bandwidth},
          {"closed_form_P_b", r.closed_form_price},
          {"closed_form_L", r.closed_form_bound},
          {"schedule", to_json(r.schedule)},
          {"trace", trace}};
}

inline nlohmann::ordered_json to_json(const SimulationReport& r) {
  return {{"revenue_mean", r.revenue_mean},
          {"revenue_stderr", r.revenue_stderr},
          {"bc_user_fraction", r.bc_user_fraction},
          {"payoff_guarantee_violations", r.payoff_guarantee_violations},
          {"trials", r.trials},
          {"seed", r.seed},
          {"bc_revenue_mean", r.bc_revenue_mean},
          {"uc_revenue", r.uc_revenue},
          {"broadcast_rate", r.broadcast_rate},
          {"mean_payoff_policy", r.mean_payoff_policy},
          {"mean_payoff_unicast_only", r.mean_payoff_unicast_only},
          {"nonpositive_uc_payoffs", r.nonpositive_uc_payoffs},
          {"rejected_users", r.rejected_users},
          {"uc_underloaded_trials", r.uc_underloaded_trials},
          {"unrequested_files_mean", r.unrequested_files_mean}};
}

inline nlohmann::ordered_json to_json(const ValidationReport& report) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks)
    checks.push_back(
        {{"name", c.name}, {"status", std::string(to_string(c.status))}, {"measured", c.measured}, {"detail", c.detail}});
  return {{"passed", report.passed()}, {"checks", checks}};
}

} // namespace cbcast
