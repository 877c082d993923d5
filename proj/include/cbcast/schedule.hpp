#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace cbcast {

// Broadcast queue: files leave in `order`; completion[i] = s_i, the amount of
// broadcast data sent by the time file i finishes.
struct Schedule {
  std::vector<std::size_t> order;
  std::vector<double> completion;

  std::size_t size() const noexcept { return order.size(); }
  bool operator==(const Schedule&) const = default;
};

// Whether s_i counts file i's own size. Inclusive is the model; exclusive
// exists for sensitivity checks only.
enum class Completion { inclusive, exclusive };

inline void validate_permutation(std::span<const std::size_t> order, std::size_t files) {
  if (order.size() != files) {
    std::ostringstream os;
    os << "schedule lists " << order.size() << " files, catalog has " << files;
    throw InvalidPermutation(os.str());
  }
  std::vector<bool> seen(files, false);
  for (std::size_t idx : order) {
    if (idx >= files) {
      std::ostringstream os;
      os << "schedule index " << idx + 1 << " outside 1.." << files;
      throw InvalidPermutation(os.str());
    }
    if (seen[idx]) {
      std::ostringstream os;
      os << "schedule repeats file " << idx + 1;
      throw InvalidPermutation(os.str());
    }
    seen[idx] = true;
  }
}

// Running sum of sizes along `order`, returned indexed by file.
inline std::vector<double> cumulative_sizes(std::span<const std::size_t> order, std::span<const double> sizes,
                                            Completion mode = Completion::inclusive) {
  validate_permutation(order, sizes.size());
  std::vector<double> s(sizes.size(), 0.0);
  double sent = 0.0;
  for (std::size_t idx : order) {
    if (mode == Completion::exclusive)
      s[idx] = sent;
    sent += sizes[idx];
    if (mode == Completion::inclusive)
      s[idx] = sent;
  }
  return s;
}

inline Schedule make_schedule(std::vector<std::size_t> order, std::span<const double> sizes,
                              Completion mode = Completion::inclusive) {
  auto s = cumulative_sizes(order, sizes, mode);
  return {std::move(order), std::move(s)};
}

// Indices by descending weight; equal weights keep ascending index order.
inline std::vector<std::size_t> order_by_weight(std::span<const double> weights) {
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  return order;
}

} // namespace cbcast
