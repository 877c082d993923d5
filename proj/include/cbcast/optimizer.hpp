#pragma once

// Joint choice of broadcast bandwidth W_b, broadcast price P_b and queue
// order, maximizing the revenue lower bound.
//
// Writing A1 = sum s theta f p, A2 = sum s theta f^2 p and rho = r_u / r_b, the
// bound's broadcast term is
//
//   N P_b [F - rho (A1 - (P_u - P_b) A2) / W_b]
//
// which is concave in W_b alone and in P_b alone. For a fixed order the
// box-constrained maximum is found in closed form; alternating it with the
// Smith order never decreases the bound.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "cell.hpp"
#include "demand.hpp"
#include "error.hpp"
#include "revenue_bound.hpp"
#include "schedule.hpp"
#include "scheduler.hpp"

namespace cbcast {

// Bandwidth maximizing the bound for a fixed price and order:
//   W_b = sqrt(N P_b rho (A1 - (P_u - P_b) A2) / (P_u T)), projected onto [0, beta W].
inline double exact_bandwidth_given_price(const FileCatalog& catalog, const CellConfig& cell, double broadcast_price,
                                          const Schedule& schedule) {
  cell.validate();
  if (!(broadcast_price >= 0.0))
    throw InvalidParameter("broadcast price must be non-negative");
  if (cell.users == 0 || broadcast_price == 0.0)
    return 0.0;
  const auto m = bound_moments(catalog, schedule);
  const double rho = cell.unicast_rate() / cell.broadcast_rate();
  const double penalty = rho * (m.delay_mass - (cell.unicast_price - broadcast_price) * m.delay_mass_sq);
  if (!(penalty > 0.0))
    throw PreconditionViolation("bound penalty is non-positive at this price; the bandwidth optimum is degenerate "
                                "(requires (P_u - P_b) f_i < 1)");
  const double unclamped =
      std::sqrt(static_cast<double>(cell.users) * broadcast_price * penalty / (cell.unicast_price * cell.slots));
  return std::clamp(unclamped, 0.0, cell.broadcast_cap());
}

// Price maximizing the bound for a fixed bandwidth and order:
//   P_b = P_u/2 + (2 A2)^{-1} sum_i p_i f_i (W_b r_b / r_u - s_i theta_i), projected onto [floor, P_u].
inline double exact_price_given_bandwidth(const FileCatalog& catalog, const CellConfig& cell,
                                          double broadcast_bandwidth, const Schedule& schedule,
                                          double price_floor = 0.0) {
  cell.validate();
  const auto m = bound_moments(catalog, schedule);
  if (!(m.delay_mass_sq > 0.0))
    throw InvalidParameter("sum s_i theta_i f_i^2 p_i must be positive");
  const double lo = std::clamp(price_floor, 0.0, cell.unicast_price);
  if (!(broadcast_bandwidth > 0.0))
    return lo;
  const double rho = cell.unicast_rate() / cell.broadcast_rate();
  const double correction = (broadcast_bandwidth * m.mean_size / rho - m.delay_mass) / (2.0 * m.delay_mass_sq);
  return std::clamp(cell.unicast_price / 2.0 + correction, lo, cell.unicast_price);
}

// G = 0.5 + sum s_i theta_i p_i / S*
inline double gain_offset(const FileCatalog& catalog, const Schedule& schedule, double delay_mass) {
  if (!(delay_mass > 0.0))
    throw InvalidParameter("gain offset needs S* > 0");
  return 0.5 + bound_moments(catalog, schedule).delay_popularity / delay_mass;
}

// R ~ 1 + N F / (2 W T) {min(N r_b F^2 / (4 P_u^2 T r_u S*), 1) + 1 - G / P_u}
inline double revenue_gain(const FileCatalog& catalog, const CellConfig& cell, double delay_mass,
                           const Schedule& schedule) {
  cell.validate();
  if (!(delay_mass > 0.0))
    throw InvalidParameter("revenue gain needs S* > 0");
  if (cell.users == 0)
    return 1.0;
  const double n = static_cast<double>(cell.users);
  const double F = catalog.mean_size();
  const double pu = cell.unicast_price;
  const double demand = n * cell.broadcast_rate() * F * F /
                        (4.0 * pu * pu * cell.slots * cell.unicast_rate() * delay_mass);
  const double g = gain_offset(catalog, schedule, delay_mass);
  return 1.0 + n * F / (2.0 * cell.bandwidth * cell.slots) * (std::min(demand, 1.0) + 1.0 - g / pu);
}

// Maximizer of the bound over the box [0, beta W] x [floor, P_u] for a fixed
// order. With c0 = A1 - P_u A2, the interior stationary points solve
//   rho P_u T (c0 + 2 A2 P)^2 = N F^2 P (c0 + A2 P),  W_b = rho (c0 + 2 A2 P) / F
// and the remaining candidates lie on the box edges.
struct OrderOptimum {
  double broadcast_bandwidth = 0.0;
  double broadcast_price = 0.0;
  double bound = -std::numeric_limits<double>::infinity();
};

inline OrderOptimum optimize_for_order(const FileCatalog& catalog, const CellConfig& cell, const Schedule& schedule,
                                       double price_floor) {
  const auto m = bound_moments(catalog, schedule);
  const double rho = cell.unicast_rate() / cell.broadcast_rate();
  const double pu = cell.unicast_price;
  const double cap = cell.broadcast_cap();
  const double lo = std::clamp(price_floor, 0.0, pu);
  OrderOptimum best;
  auto consider = [&](double w, double p) {
    if (!(w > 0.0) || !std::isfinite(w) || !std::isfinite(p))
      return;
    w = std::min(w, cap);
    p = std::clamp(p, lo, pu);
    const double v = bound_value(catalog, cell, p, w, schedule);
    if (v > best.bound)
      best = {w, p, v};
  };
  auto bandwidth_at = [&](double p) {
    try {
      return exact_bandwidth_given_price(catalog, cell, p, schedule);
    } catch (const PreconditionViolation&) {
      return 0.0;
    }
  };

  const double a = m.delay_mass_sq;
  const double c0 = m.delay_mass - pu * a;
  const double k = rho * pu * cell.slots;
  const double n = static_cast<double>(cell.users) * m.mean_size * m.mean_size;
  const double qa = a * (4.0 * k * a - n);
  const double qb = c0 * (4.0 * k * a - n);
  const double qc = k * c0 * c0;
  std::vector<double> roots;
  if (qa != 0.0) {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
      roots.push_back(q / qa);
      if (q != 0.0)
        roots.push_back(qc / q);
    }
  } else if (qb != 0.0) {
    roots.push_back(-qc / qb);
  }
  for (double p : roots)
    if (p >= lo && p <= pu) {
      const double w = rho * (c0 + 2.0 * a * p) / m.mean_size;
      if (w > 0.0 && w <= cap)
        consider(w, p);
    }

  consider(bandwidth_at(lo), lo);
  consider(bandwidth_at(pu), pu);
  consider(cap, exact_price_given_bandwidth(catalog, cell, cap, schedule, lo));
  consider(cap, lo);
  consider(cap, pu);
  return best;
}

struct OptimizeOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 500;
  // Keep P_b where (P_u - P_b) f_i < 1 so the maximized quantity is a valid bound.
  bool restrict_to_bound_region = true;
};

struct OptimizationResult {
  double broadcast_bandwidth = 0.0; // W_b*
  double broadcast_price = 0.0;     // P_b*
  Schedule schedule;
  double delay_mass = 0.0;          // S*
  double gain_offset = 0.0;         // G
  double lower_bound = 0.0;         // L at the optimum
  double gain = 1.0;                // R from the closed-form gain expression
  double bound_gain = 1.0;          // L / (P_u W T)
  bool bound_hypothesis_holds = true;
  std::size_t iterations = 0;
  std::vector<IterationRecord> trace;

  // One-shot closed forms on the suboptimal order, for comparison.
  double closed_form_bandwidth = 0.0;
  double closed_form_price = 0.0;
  double closed_form_bound = 0.0;
};

inline OptimizationResult joint_optimize(const FileCatalog& catalog, const CellConfig& cell,
                                         const OptimizeOptions& options = {}) {
  cell.validate();
  OptimizationResult result;

  const Schedule start = suboptimal_schedule(catalog, cell.unicast_price);
  const double start_mass = bound_moments(catalog, start).delay_mass;
  result.closed_form_bandwidth = closed_form_bandwidth(catalog, cell);
  result.closed_form_price = closed_form_price(catalog, cell, start_mass);
  result.closed_form_bound =
      bound_value(catalog, cell, result.closed_form_price, result.closed_form_bandwidth, start);

  if (cell.users == 0) {
    result.broadcast_bandwidth = 0.0;
    result.broadcast_price = cell.unicast_price / 2.0;
    result.schedule = start;
    result.delay_mass = start_mass;
    result.gain_offset = gain_offset(catalog, start, start_mass);
    result.lower_bound = cell.unicast_only_revenue();
    result.gain = 1.0;
    result.bound_gain = 1.0;
    result.bound_hypothesis_holds = bound_hypothesis_holds(catalog, cell.unicast_price, result.broadcast_price);
    return result;
  }

  const double floor = options.restrict_to_bound_region ? bound_price_floor(catalog, cell) : 0.0;
  double bandwidth = result.closed_form_bandwidth;
  double price = std::clamp(result.closed_form_price, floor, cell.unicast_price);
  Schedule schedule = start;
  result.trace.push_back({bandwidth, price, bound_value(catalog, cell, price, bandwidth, schedule)});

  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    const auto point = optimize_for_order(catalog, cell, schedule, floor);
    if (!(point.broadcast_bandwidth > 0.0))
      throw PreconditionViolation("no feasible broadcast operating point for this order");
    Schedule next_schedule = smith_schedule(catalog, cell.unicast_price, point.broadcast_price);
    const bool settled = next_schedule.order == schedule.order &&
                         std::abs(point.broadcast_bandwidth - bandwidth) <= options.tolerance &&
                         std::abs(point.broadcast_price - price) <= options.tolerance;
    const bool stalled = next_schedule.order != schedule.order &&
                         bound_value(catalog, cell, point.broadcast_price, point.broadcast_bandwidth, next_schedule) <=
                             point.bound;
    bandwidth = point.broadcast_bandwidth;
    price = point.broadcast_price;
    result.trace.push_back({bandwidth, price, point.bound});
    if (!settled && !stalled) {
      if (next_schedule.order != schedule.order)
        schedule = std::move(next_schedule);
      continue;
    }

    result.iterations = it;
    result.broadcast_price = price;
    result.schedule = std::move(schedule);
    result.delay_mass = bound_moments(catalog, result.schedule).delay_mass;
    result.gain_offset = gain_offset(catalog, result.schedule, result.delay_mass);
    result.gain = revenue_gain(catalog, cell, result.delay_mass, result.schedule);
    result.bound_hypothesis_holds = bound_hypothesis_holds(catalog, cell.unicast_price, price);
    // W_b = 0 (no broadcast) is feasible and earns P_u W T; keep it when the
    // interior point is worse.
    if (point.bound >= cell.unicast_only_revenue()) {
      result.broadcast_bandwidth = bandwidth;
      result.lower_bound = point.bound;
    } else {
      result.broadcast_bandwidth = 0.0;
      result.lower_bound = cell.unicast_only_revenue();
    }
    result.bound_gain = result.lower_bound / cell.unicast_only_revenue();
    return result;
  }

  std::ostringstream os;
  os << "joint optimization did not settle within " << options.max_iterations << " iterations (last W_b="
     << bandwidth << ", P_b=" << price << ")";
  throw ConvergenceError(os.str(), std::move(result.trace));
}

} // namespace cbcast
