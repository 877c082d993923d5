#pragma once

// Analytical revenue lower bound
//
//   L = P_b N sum_i f_i p_i [1 - s_i theta_i r_u / (W_b r_b) {1 - (P_u - P_b) f_i}] + P_u (W - W_b) T
//
// valid while (P_u - P_b) f_i < 1 for every file, and the one-shot closed-form
// approximations of the optimal broadcast bandwidth and price.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "cell.hpp"
#include "demand.hpp"
#include "error.hpp"
#include "schedule.hpp"

namespace cbcast {

// Schedule-dependent sums that drive every formula of the bound.
struct BoundMoments {
  double mean_size = 0.0;           // F = sum f p
  double delay_mass = 0.0;          // S* = sum s theta f p
  double delay_mass_sq = 0.0;       // sum s theta f^2 p
  double delay_popularity = 0.0;    // sum s theta p
};

inline BoundMoments bound_moments(const FileCatalog& catalog, const Schedule& schedule) {
  if (schedule.completion.size() != catalog.size())
    throw InvalidParameter("schedule does not match catalog size");
  BoundMoments m;
  const auto f = catalog.sizes();
  const auto p = catalog.popularity();
  const auto th = catalog.theta();
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const double stp = schedule.completion[i] * th[i] * p[i];
    m.mean_size += f[i] * p[i];
    m.delay_mass += stp * f[i];
    m.delay_mass_sq += stp * f[i] * f[i];
    m.delay_popularity += stp;
  }
  return m;
}

// Files (0-based) with (P_u - P_b) f_i >= 1.
inline std::vector<std::size_t> bound_hypothesis_violations(const FileCatalog& catalog, double unicast_price,
                                                            double broadcast_price) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < catalog.size(); ++i)
    if (!((unicast_price - broadcast_price) * catalog.sizes()[i] < 1.0))
      bad.push_back(i);
  return bad;
}

inline bool bound_hypothesis_holds(const FileCatalog& catalog, double unicast_price, double broadcast_price) {
  return bound_hypothesis_violations(catalog, unicast_price, broadcast_price).empty();
}

// Smallest broadcast price (with a relative margin) for which the bound hypothesis holds.
inline double bound_price_floor(const FileCatalog& catalog, const CellConfig& cell) {
  constexpr double margin = 1e-9;
  return std::max(0.0, cell.unicast_price - (1.0 - margin) / catalog.max_size());
}

// The bound expression evaluated as written, without checking its hypothesis.
// W_b = 0 with a positive broadcast price has no finite value.
inline double bound_value(const FileCatalog& catalog, const CellConfig& cell, double broadcast_price,
                          double broadcast_bandwidth, const Schedule& schedule) {
  const double uc = cell.unicast_price * (cell.bandwidth - broadcast_bandwidth) * cell.slots;
  if (cell.users == 0 || broadcast_price == 0.0)
    return uc;
  if (!(broadcast_bandwidth > 0.0))
    return -std::numeric_limits<double>::infinity();

  const double rate_ratio = cell.unicast_rate() / cell.broadcast_rate();
  const auto f = catalog.sizes();
  const auto p = catalog.popularity();
  const auto th = catalog.theta();
  double sum = 0.0;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const double penalty = schedule.completion[i] * th[i] * rate_ratio / broadcast_bandwidth *
                           (1.0 - (cell.unicast_price - broadcast_price) * f[i]);
    sum += f[i] * p[i] * (1.0 - penalty);
  }
  return broadcast_price * static_cast<double>(cell.users) * sum + uc;
}

// Checked lower bound L. Throws if W_b <= 0 or the bound hypothesis fails.
inline double lower_bound_revenue(const FileCatalog& catalog, const CellConfig& cell, double broadcast_price,
                                  double broadcast_bandwidth, const Schedule& schedule) {
  cell.validate();
  if (!(broadcast_bandwidth > 0.0))
    throw InvalidParameter("lower bound needs a positive broadcast bandwidth");
  validate_permutation(schedule.order, catalog.size());
  const auto bad = bound_hypothesis_violations(catalog, cell.unicast_price, broadcast_price);
  if (!bad.empty()) {
    std::ostringstream os;
    os << "(P_u - P_b) f_i < 1 fails for file(s)";
    for (std::size_t i = 0; i < bad.size() && i < 20; ++i)
      os << ' ' << bad[i] + 1;
    if (bad.size() > 20)
      os << " ... (" << bad.size() << " total)";
    throw PreconditionViolation(os.str());
  }
  return bound_value(catalog, cell, broadcast_price, broadcast_bandwidth, schedule);
}

// W_b* ~ min(N F / (4 P_u T), beta W)
inline double closed_form_bandwidth(const FileCatalog& catalog, const CellConfig& cell) {
  cell.validate();
  const double unclamped =
      static_cast<double>(cell.users) * catalog.mean_size() / (4.0 * cell.unicast_price * cell.slots);
  return std::min(unclamped, cell.broadcast_cap());
}

// P_b* ~ min{(N r_b F^2 / (4 P_u T r_u S*) + P_u) / 2, P_u}
inline double closed_form_price(const FileCatalog& catalog, const CellConfig& cell, double delay_mass) {
  cell.validate();
  if (!(delay_mass > 0.0))
    throw InvalidParameter("closed-form price needs S* > 0");
  const double F = catalog.mean_size();
  const double demand_term = static_cast<double>(cell.users) * cell.broadcast_rate() * F * F /
                             (4.0 * cell.unicast_price * cell.slots * cell.unicast_rate() * delay_mass);
  return std::min(0.5 * (demand_term + cell.unicast_price), cell.unicast_price);
}

} // namespace cbcast
