#pragma once

#include <cmath>
#include <cstddef>

#include "channel.hpp"
#include "error.hpp"

namespace cbcast {

// Normalized cell parameters. Bandwidth is in units of one unicast grant,
// time in slots, rates in file-size units per slot per bandwidth unit.
struct CellConfig {
  double bandwidth = 0.0;       // W
  double slots = 0.0;           // T
  std::size_t users = 0;        // N
  double unicast_price = 0.0;   // P_u
  RateModel rates;
  double bc_cap_fraction = 1.0; // beta: broadcast may use at most beta*W

  void validate() const {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
      throw InvalidParameter("cell bandwidth W must be positive");
    if (!(slots > 0.0) || !std::isfinite(slots))
      throw InvalidParameter("slots per interval T must be positive");
    if (!(unicast_price > 0.0) || !std::isfinite(unicast_price))
      throw InvalidParameter("unicast price P_u must be positive");
    if (!(bc_cap_fraction > 0.0 && bc_cap_fraction <= 1.0))
      throw InvalidParameter("broadcast cap fraction must lie in (0, 1]");
    rates.validate();
  }

  double broadcast_cap() const noexcept { return bc_cap_fraction * bandwidth; }
  double unicast_rate() const { return cbcast::unicast_rate(rates); }
  // Analytical broadcast rate: the large-audience limit r_l.
  double broadcast_rate() const { return broadcast_rate_limit(rates); }
  // Revenue of the unicast-only network, P_u W T.
  double unicast_only_revenue() const noexcept { return unicast_price * bandwidth * slots; }
};

} // namespace cbcast
