#pragma once

// User payoffs, the broadcast/unicast selection policy and a Monte Carlo
// estimator of the true revenue L0 under that policy.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "cell.hpp"
#include "channel.hpp"
#include "demand.hpp"
#include "error.hpp"
#include "random.hpp"
#include "schedule.hpp"

namespace cbcast {

struct PricePair {
  double unicast = 0.0;
  double broadcast = 0.0;

  void validate() const {
    if (!(broadcast >= 0.0 && broadcast <= unicast))
      throw InvalidParameter("prices must satisfy 0 <= P_b <= P_u");
  }
};

enum class Service { unicast, broadcast };

// U_ik = log((1 + f_i) / (f_i / r_k^u - theta_ik)) - P_u f_i
inline double unicast_payoff(double size, double threshold, double rate, double unicast_price) {
  if (!(rate > 0.0))
    throw InvalidParameter("unicast rate must be positive");
  const double delay = size / rate - threshold;
  if (!(delay > 0.0) || !(1.0 + size > 0.0)) {
    std::ostringstream os;
    os << "unicast payoff undefined: f/r - theta = " << delay;
    throw DomainError(os.str());
  }
  return std::log((1.0 + size) / delay) - unicast_price * size;
}

// B_ik = log((1 + f_i) / (s_i / (W_b r_k^b) - theta_ik)) - P_b f_i
inline double broadcast_payoff(double size, double threshold, double rate, double completion,
                               double broadcast_bandwidth, double broadcast_price) {
  if (!(broadcast_bandwidth > 0.0))
    throw InvalidParameter("broadcast bandwidth must be positive");
  if (!(rate > 0.0))
    throw InvalidParameter("broadcast rate must be positive");
  const double delay = completion / (broadcast_bandwidth * rate) - threshold;
  if (!(delay > 0.0) || !(1.0 + size > 0.0)) {
    std::ostringstream os;
    os << "broadcast payoff undefined: s/(W_b r_b) - theta = " << delay;
    throw DomainError(os.str());
  }
  return std::log((1.0 + size) / delay) - broadcast_price * size;
}

// Users expect unicast. If broadcast pays them at least as much, unicast is
// still used while capacity lasts (it earns more per bit); only then broadcast.
inline Service select_service(double unicast_payoff_value, double broadcast_payoff_value,
                              bool unicast_capacity_available) {
  if (broadcast_payoff_value < unicast_payoff_value)
    return Service::unicast;
  return unicast_capacity_available ? Service::unicast : Service::broadcast;
}

struct SimulationOptions {
  // Drop users whose unicast payoff is not positive instead of serving them.
  bool reject_nonpositive_payoff = false;
};

struct SimulationReport {
  double revenue_mean = 0.0;
  double revenue_stderr = 0.0;
  double bc_revenue_mean = 0.0;
  double uc_revenue = 0.0;
  double bc_user_fraction = 0.0;
  std::size_t payoff_guarantee_violations = 0;
  double mean_payoff_policy = 0.0;
  double mean_payoff_unicast_only = 0.0;
  std::size_t nonpositive_uc_payoffs = 0;
  std::size_t rejected_users = 0;
  std::size_t uc_underloaded_trials = 0;
  double unrequested_files_mean = 0.0;
  double broadcast_rate = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> trial_revenues;
};

// Each trial draws N users (file, position, threshold), visits them in
// popularity order and applies the selection policy. Unicast users occupy one
// bandwidth unit for ceil(f_i / r_k^u) slots out of (W - W_b) T. Broadcast users
// pay P_b f_i; the unicast term P_u (W - W_b) T is fixed. The broadcast rate of
// a trial is r_b(N) with all N users as the potential audience. Unrequested
// files keep their place in the queue.
inline SimulationReport simulate_revenue(const FileCatalog& catalog, const CellConfig& cell, const PricePair& prices,
                                         double broadcast_bandwidth, const Schedule& schedule, std::size_t trials,
                                         std::uint64_t seed, const SimulationOptions& options = {}) {
  cell.validate();
  prices.validate();
  validate_permutation(schedule.order, catalog.size());
  if (trials < 1)
    throw InvalidParameter("simulation needs at least one trial");
  if (!(broadcast_bandwidth >= 0.0 && broadcast_bandwidth <= cell.bandwidth))
    throw InvalidParameter("broadcast bandwidth must lie in [0, W]");

  SimulationReport report;
  report.trials = trials;
  report.seed = seed;
  report.uc_revenue = prices.unicast * (cell.bandwidth - broadcast_bandwidth) * cell.slots;
  report.broadcast_rate = broadcast_rate(cell.rates, static_cast<std::int64_t>(cell.users));
  report.trial_revenues.reserve(trials);

  const double uc_capacity_total = (cell.bandwidth - broadcast_bandwidth) * cell.slots;
  std::vector<std::size_t> rank(catalog.size());
  {
    const auto order = catalog.popularity_order();
    for (std::size_t r = 0; r < order.size(); ++r)
      rank[order[r]] = r;
  }
  std::discrete_distribution<std::size_t> pick(catalog.popularity().begin(), catalog.popularity().end());

  struct User {
    std::size_t file;
    double rate;
    double threshold;
  };
  std::vector<User> users(cell.users);
  std::vector<bool> requested(catalog.size());

  std::size_t bc_users = 0;
  std::size_t served_users = 0;
  double payoff_policy_sum = 0.0;
  double payoff_uc_sum = 0.0;
  double unrequested_sum = 0.0;
  double revenue_sum = 0.0;
  double revenue_sq_sum = 0.0;
  double bc_revenue_sum = 0.0;

  for (std::size_t t = 0; t < trials; ++t) {
    Engine engine = make_engine(seed, t);
    std::fill(requested.begin(), requested.end(), false);
    for (auto& u : users) {
      u.file = pick(engine);
      u.rate = sample_user_rate(cell.rates, engine);
      const auto& d = catalog.file(u.file).delay;
      u.threshold = draw_uniform(engine, d.lo, d.hi);
      requested[u.file] = true;
    }
    std::stable_sort(users.begin(), users.end(),
                     [&](const User& a, const User& b) { return rank[a.file] < rank[b.file]; });

    double capacity = uc_capacity_total;
    double uc_demand = 0.0;
    double bc_income = 0.0;
    for (const auto& u : users) {
      const double f = catalog.sizes()[u.file];
      const double uc = unicast_payoff(f, u.threshold, u.rate, prices.unicast);
      const double need = std::ceil(f / u.rate);
      uc_demand += need;
      if (!(uc > 0.0)) {
        ++report.nonpositive_uc_payoffs;
        if (options.reject_nonpositive_payoff) {
          ++report.rejected_users;
          continue;
        }
      }
      const double bc = broadcast_bandwidth > 0.0
                            ? broadcast_payoff(f, u.threshold, report.broadcast_rate, schedule.completion[u.file],
                                               broadcast_bandwidth, prices.broadcast)
                            : -std::numeric_limits<double>::infinity();
      const bool room = capacity >= need;
      double realized = uc;
      if (select_service(uc, bc, room) == Service::broadcast) {
        bc_income += prices.broadcast * f;
        ++bc_users;
        realized = bc;
      } else if (room) {
        capacity -= need;
      }
      if (realized < uc)
        ++report.payoff_guarantee_violations;
      payoff_policy_sum += realized;
      payoff_uc_sum += uc;
      ++served_users;
    }
    if (uc_demand < uc_capacity_total)
      ++report.uc_underloaded_trials;

    const double revenue = bc_income + report.uc_revenue;
    report.trial_revenues.push_back(revenue);
    revenue_sum += revenue;
    revenue_sq_sum += revenue * revenue;
    bc_revenue_sum += bc_income;
    unrequested_sum += static_cast<double>(std::count(requested.begin(), requested.end(), false));
  }

  const double n = static_cast<double>(trials);
  report.revenue_mean = revenue_sum / n;
  report.bc_revenue_mean = bc_revenue_sum / n;
  if (trials > 1) {
    double var = 0.0;
    for (double r : report.trial_revenues)
      var += (r - report.revenue_mean) * (r - report.revenue_mean);
    var /= (n - 1.0);
    report.revenue_stderr = std::sqrt(var / n);
  }
  (void)revenue_sq_sum;
  const double total_users = static_cast<double>(cell.users) * n;
  report.bc_user_fraction = total_users > 0.0 ? static_cast<double>(bc_users) / total_users : 0.0;
  if (served_users > 0) {
    report.mean_payoff_policy = payoff_policy_sum / static_cast<double>(served_users);
    report.mean_payoff_unicast_only = payoff_uc_sum / static_cast<double>(served_users);
  }
  report.unrequested_files_mean = unrequested_sum / n;
  return report;
}

} // namespace cbcast
