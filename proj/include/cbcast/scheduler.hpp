#pragma once

// Broadcast queue ordering. For a fixed broadcast price the bound is maximized
// by minimizing sum_i s_i c_i with c_i = theta_i f_i p_i {1 - (P_u - P_b) f_i},
// a single-machine weighted completion time problem solved by Smith's ratio
// rule (c_i / f_i descending).

#include <cstdint>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cell.hpp"
#include "demand.hpp"
#include "error.hpp"
#include "format.hpp"
#include "revenue_bound.hpp"
#include "schedule.hpp"

namespace cbcast {

enum class SchedulerVariant { optimal, suboptimal, none };

inline std::string_view to_string(SchedulerVariant v) {
  switch (v) {
  case SchedulerVariant::optimal:
    return "optimal";
  case SchedulerVariant::suboptimal:
    return "suboptimal";
  case SchedulerVariant::none:
    return "none";
  }
  return "unknown";
}

inline SchedulerVariant parse_scheduler_variant(std::string_view text) {
  if (text == "optimal")
    return SchedulerVariant::optimal;
  if (text == "suboptimal")
    return SchedulerVariant::suboptimal;
  if (text == "none")
    return SchedulerVariant::none;
  throw InvalidParameter("unknown scheduler variant '" + std::string(text) + "'");
}

// Smith ratio theta_i p_i {1 - (P_u - P_b) f_i}.
inline std::vector<double> smith_weights(const FileCatalog& catalog, double unicast_price, double broadcast_price) {
  std::vector<double> w(catalog.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = catalog.theta()[i] * catalog.popularity()[i] *
           (1.0 - (unicast_price - broadcast_price) * catalog.sizes()[i]);
  return w;
}

// theta_i p_i (1 - P_u f_i / 2): the Smith ratio at the lower end P_b = P_u/2
// of the closed-form price range, which removes the dependence on S*.
inline std::vector<double> suboptimal_weights(const FileCatalog& catalog, double unicast_price) {
  std::vector<double> w(catalog.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = catalog.theta()[i] * catalog.popularity()[i] * (1.0 - unicast_price * catalog.sizes()[i] / 2.0);
  return w;
}

inline Schedule smith_schedule(const FileCatalog& catalog, double unicast_price, double broadcast_price) {
  return make_schedule(order_by_weight(smith_weights(catalog, unicast_price, broadcast_price)), catalog.sizes());
}

inline Schedule suboptimal_schedule(const FileCatalog& catalog, double unicast_price) {
  return make_schedule(order_by_weight(suboptimal_weights(catalog, unicast_price)), catalog.sizes());
}

// Baseline without a scheduler: most popular file first.
inline Schedule popularity_schedule(const FileCatalog& catalog) {
  return make_schedule(catalog.popularity_order(), catalog.sizes());
}

// Objective of the scheduling subproblem, sum_i s_i theta_i f_i p_i {1 - (P_u - P_b) f_i}.
inline double smith_cost(std::span<const std::size_t> order, const FileCatalog& catalog, double unicast_price,
                         double broadcast_price) {
  const auto bad = bound_hypothesis_violations(catalog, unicast_price, broadcast_price);
  if (!bad.empty())
    throw PreconditionViolation("(P_u - P_b) f_i < 1 fails for file " + std::to_string(bad.front() + 1));
  const auto s = cumulative_sizes(order, catalog.sizes());
  double cost = 0.0;
  for (std::size_t i = 0; i < catalog.size(); ++i)
    cost += s[i] * catalog.theta()[i] * catalog.sizes()[i] * catalog.popularity()[i] *
            (1.0 - (unicast_price - broadcast_price) * catalog.sizes()[i]);
  return cost;
}

struct OptimalSchedule {
  Schedule schedule;
  double delay_mass = 0.0;      // S* of the returned order
  double broadcast_price = 0.0; // closed-form P_b* implied by that S*
  std::vector<double> weights;  // w_i* at that price
  bool converged = false;
  std::size_t iterations = 0;
};

// Recursive optimal order: w_i* depends on S*, which depends on the order.
// Starting from the suboptimal order, re-sort by w_i* until the order repeats.
// w_i* uses the clamped closed-form price, so once P_b* reaches P_u the weights
// reduce to theta_i p_i. A cycle ends the search with the best-bound order seen.
inline OptimalSchedule optimal_schedule(const FileCatalog& catalog, const CellConfig& cell,
                                        std::size_t max_iterations = 1000) {
  cell.validate();
  const double bandwidth = closed_form_bandwidth(catalog, cell);

  auto evaluate = [&](std::vector<std::size_t> order) {
    OptimalSchedule state;
    state.schedule = make_schedule(std::move(order), catalog.sizes());
    state.delay_mass = bound_moments(catalog, state.schedule).delay_mass;
    state.broadcast_price = closed_form_price(catalog, cell, state.delay_mass);
    state.weights = smith_weights(catalog, cell.unicast_price, state.broadcast_price);
    return state;
  };
  auto score = [&](const OptimalSchedule& s) {
    return bound_value(catalog, cell, s.broadcast_price, bandwidth, s.schedule);
  };

  OptimalSchedule current = evaluate(suboptimal_schedule(catalog, cell.unicast_price).order);
  OptimalSchedule best = current;
  double best_score = score(best);
  std::set<std::vector<std::size_t>> visited{current.schedule.order};

  std::size_t it = 1;
  for (; it <= max_iterations; ++it) {
    auto next_order = order_by_weight(current.weights);
    if (next_order == current.schedule.order) {
      current.converged = true;
      current.iterations = it;
      return current;
    }
    const bool cycle = !visited.insert(next_order).second;
    current = evaluate(std::move(next_order));
    if (const double s = score(current); s > best_score) {
      best_score = s;
      best = current;
    }
    if (cycle)
      break;
  }
  best.converged = false;
  best.iterations = std::min(it, max_iterations);
  return best;
}

// Weights reported alongside a schedule for each variant.
inline std::vector<double> variant_weights(SchedulerVariant variant, const FileCatalog& catalog,
                                           const CellConfig& cell) {
  switch (variant) {
  case SchedulerVariant::optimal:
    return optimal_schedule(catalog, cell).weights;
  case SchedulerVariant::suboptimal:
    return suboptimal_weights(catalog, cell.unicast_price);
  case SchedulerVariant::none:
    return {catalog.popularity().begin(), catalog.popularity().end()};
  }
  return {};
}

inline Schedule variant_schedule(SchedulerVariant variant, const FileCatalog& catalog, const CellConfig& cell) {
  switch (variant) {
  case SchedulerVariant::optimal:
    return optimal_schedule(catalog, cell).schedule;
  case SchedulerVariant::suboptimal:
    return suboptimal_schedule(catalog, cell.unicast_price);
  case SchedulerVariant::none:
    return popularity_schedule(catalog);
  }
  return {};
}

// CSV columns: position, file, f_i, s_i, weight (1-based position and file).
inline void write_schedule_csv(const Schedule& schedule, const FileCatalog& catalog, std::span<const double> weights,
                               std::ostream& out) {
  out << "position,file,f_i,s_i,weight\n";
  for (std::size_t pos = 0; pos < schedule.order.size(); ++pos) {
    const std::size_t i = schedule.order[pos];
    out << pos + 1 << ',' << i + 1 << ',' << format_number(catalog.sizes()[i]) << ','
        << format_number(schedule.completion[i]) << ',' << format_number(i < weights.size() ? weights[i] : 0.0)
        << '\n';
  }
}

} // namespace cbcast
