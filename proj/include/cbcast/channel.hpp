#pragma once

// Two-region spectral-efficiency model. A user lies in the high-rate region
// with probability `prob_high` and otherwise in the low-rate region. Unicast
// adapts to each user; broadcast has to serve its worst receiver.

#include <cmath>
#include <cstdint>
#include <sstream>

#include "error.hpp"
#include "random.hpp"

namespace cbcast {

struct RateModel {
  double high = 0.0;      // r_h
  double low = 0.0;       // r_l
  double prob_high = 0.0; // Pr{user in high-rate region}

  void validate() const {
    if (!(low > 0.0) || !(low <= high) || !std::isfinite(high)) {
      std::ostringstream os;
      os << "rate model requires 0 < r_l <= r_h, got r_l=" << low << " r_h=" << high;
      throw InvalidParameter(os.str());
    }
    if (!(prob_high >= 0.0 && prob_high <= 1.0))
      throw InvalidParameter("rate model prob_high must lie in [0, 1]");
  }

  // Same model with both rates multiplied by `factor` (unit conversion).
  RateModel scaled(double factor) const { return {high * factor, low * factor, prob_high}; }
};

// |A_l|/|A_h| = rho  ->  Pr{high} = |A_h|/|A| = 1/(1+rho).
inline double prob_high_from_area_ratio(double low_to_high_area) {
  if (!(low_to_high_area >= 0.0))
    throw InvalidParameter("area ratio must be non-negative");
  return 1.0 / (1.0 + low_to_high_area);
}

// r_u = r_l + (r_h - r_l) Pr{high}
inline double unicast_rate(const RateModel& m) {
  m.validate();
  return m.low + (m.high - m.low) * m.prob_high;
}

// r_b = r_l + (r_h - r_l) Pr{high}^{N_b}; tends to r_l as the audience grows.
inline double broadcast_rate(const RateModel& m, std::int64_t broadcast_users) {
  m.validate();
  if (broadcast_users < 0)
    throw InvalidParameter("broadcast user count must be non-negative");
  return m.low + (m.high - m.low) * std::pow(m.prob_high, static_cast<double>(broadcast_users));
}

// Large-audience limit used by every analytical formula.
inline double broadcast_rate_limit(const RateModel& m) {
  m.validate();
  return m.low;
}

// Per-user unicast rate: r_h with probability prob_high, else r_l.
inline double sample_user_rate(const RateModel& m, Engine& engine) {
  if (m.prob_high >= 1.0)
    return m.high;
  if (m.prob_high <= 0.0)
    return m.low;
  return std::bernoulli_distribution{m.prob_high}(engine) ? m.high : m.low;
}

inline double sample_user_rate(const RateModel& m, std::uint64_t seed) {
  m.validate();
  Engine engine{seed};
  return sample_user_rate(m, engine);
}

} // namespace cbcast
