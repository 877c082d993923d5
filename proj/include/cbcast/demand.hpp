#pragma once

// File catalog and request model: Zipf popularity, per-file sizes and the
// aggregate delay tolerance theta_i = E_k[1/(f_i - r_k^u theta_ik)].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <vector>

#include "channel.hpp"
#include "error.hpp"
#include "format.hpp"
#include "random.hpp"

namespace cbcast {

struct ZipfParams {
  double exponent = 1.0;       // gamma
  std::size_t catalog_size = 1; // M
};

// Bounds of the per-user delay threshold theta_ik, uniform on [lo, hi].
struct DelayRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct FileSpec {
  double size = 0.0;
  DelayRange delay;

  void validate() const {
    if (!(size > 0.0) || !std::isfinite(size))
      throw InvalidParameter("file size must be positive");
    if (!(delay.lo > 0.0) || !(delay.lo <= delay.hi))
      throw InvalidParameter("delay threshold bounds must satisfy 0 < lo <= hi");
  }
};

// p_i = i^{-gamma} / H,  H = sum_j j^{-gamma}
inline std::vector<double> zipf_pmf(const ZipfParams& params) {
  if (!(params.exponent > 0.0) || !std::isfinite(params.exponent))
    throw InvalidParameter("Zipf exponent must be positive");
  if (params.catalog_size < 1)
    throw InvalidParameter("catalog size must be at least 1");

  std::vector<double> p(params.catalog_size);
  long double harmonic = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::pow(static_cast<double>(i + 1), -params.exponent);
    harmonic += p[i];
  }
  for (auto& v : p)
    v = static_cast<double>(v / harmonic);
  return p;
}

// Each of `users` draws one file i.i.d. from `popularity`; returns the per-file counts n_i.
inline std::vector<std::size_t> sample_requests(std::span<const double> popularity, std::size_t users,
                                                std::uint64_t seed) {
  std::vector<std::size_t> counts(popularity.size(), 0);
  if (users == 0 || popularity.empty())
    return counts;
  Engine engine{seed};
  std::discrete_distribution<std::size_t> pick(popularity.begin(), popularity.end());
  for (std::size_t k = 0; k < users; ++k)
    ++counts[pick(engine)];
  return counts;
}

struct ToleranceSampling {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of theta_i over the user position (which fixes r_k^u)
// and the threshold draw. Rejects files that break delay sensitivity
// (f/r > theta + 1) for any reachable rate/threshold pair.
inline double aggregate_delay_tolerance(const FileSpec& file, const RateModel& rates,
                                        std::size_t samples, std::uint64_t seed) {
  file.validate();
  rates.validate();
  if (samples == 0)
    throw InvalidParameter("aggregate delay tolerance needs at least one sample");

  auto check_sensitivity = [&](double rate) {
    if (!(file.size / rate > file.delay.hi + 1.0)) {
      std::ostringstream os;
      os << "delay sensitivity f/r > theta + 1 fails for f=" << file.size << " r=" << rate
         << " theta=" << file.delay.hi;
      throw PreconditionViolation(os.str());
    }
  };
  if (rates.prob_high > 0.0)
    check_sensitivity(rates.high);
  if (rates.prob_high < 1.0)
    check_sensitivity(rates.low);

  Engine engine{seed};
  double sum = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double rate = sample_user_rate(rates, engine);
    const double threshold = draw_uniform(engine, file.delay.lo, file.delay.hi);
    const double denominator = file.size - rate * threshold;
    if (!(denominator > 0.0)) {
      std::ostringstream os;
      os << "draw " << n << ": f - r*theta = " << denominator << " <= 0 (f=" << file.size
         << " r=" << rate << " theta=" << threshold << ")";
      throw PreconditionViolation(os.str());
    }
    sum += 1.0 / denominator;
  }
  return sum / static_cast<double>(samples);
}

class FileCatalog {
public:
  FileCatalog() = default;

  // Assemble a catalog from explicit per-file values. theta is taken as given.
  static FileCatalog from_parts(std::vector<FileSpec> files, std::vector<double> popularity,
                                std::vector<double> theta) {
    const std::size_t m = files.size();
    if (m == 0)
      throw InvalidParameter("catalog must hold at least one file");
    if (popularity.size() != m || theta.size() != m)
      throw InvalidParameter("catalog vectors must have equal length");
    for (const auto& f : files)
      f.validate();
    double total = 0.0;
    for (double p : popularity) {
      if (!(p >= 0.0))
        throw InvalidParameter("popularity must be non-negative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw InvalidParameter("popularity must sum to 1");
    for (double t : theta)
      if (!(t > 0.0) || !std::isfinite(t))
        throw InvalidParameter("aggregate delay tolerance must be positive");

    FileCatalog c;
    c.files_ = std::move(files);
    c.popularity_ = std::move(popularity);
    c.theta_ = std::move(theta);
    c.sizes_.reserve(m);
    for (const auto& f : c.files_)
      c.sizes_.push_back(f.size);
    return c;
  }

  // Zipf popularity by rank plus Monte Carlo theta_i for every file.
  static FileCatalog build(std::vector<FileSpec> files, double zipf_exponent, const RateModel& rates,
                           const ToleranceSampling& sampling) {
    auto popularity = zipf_pmf({zipf_exponent, files.size()});
    std::vector<double> theta(files.size());
    for (std::size_t i = 0; i < files.size(); ++i)
      theta[i] = aggregate_delay_tolerance(files[i], rates, sampling.samples, derive_seed(sampling.seed, i));
    return from_parts(std::move(files), std::move(popularity), std::move(theta));
  }

  std::size_t size() const noexcept { return files_.size(); }
  const FileSpec& file(std::size_t i) const { return files_.at(i); }

  std::span<const double> sizes() const noexcept { return sizes_; }
  std::span<const double> popularity() const noexcept { return popularity_; }
  std::span<const double> theta() const noexcept { return theta_; }

  // F = sum_i f_i p_i
  double mean_size() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      s += sizes_[i] * popularity_[i];
    return s;
  }

  double max_size() const { return *std::max_element(sizes_.begin(), sizes_.end()); }

  // File indices by descending popularity, ties by ascending index.
  std::vector<std::size_t> popularity_order() const {
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return popularity_[a] > popularity_[b]; });
    return order;
  }

private:
  std::vector<FileSpec> files_;
  std::vector<double> sizes_;
  std::vector<double> popularity_;
  std::vector<double> theta_;
};

inline std::vector<std::size_t> sample_requests(const FileCatalog& catalog, std::size_t users,
                                                std::uint64_t seed) {
  return sample_requests(catalog.popularity(), users, seed);
}

// CSV columns: i, f_i, p_i, theta_i (1-based file index).
inline void write_catalog_csv(const FileCatalog& catalog, std::ostream& out) {
  out << "i,f_i,p_i,theta_i\n";
  for (std::size_t i = 0; i < catalog.size(); ++i)
    out << i + 1 << ',' << format_number(catalog.sizes()[i]) << ','
        << format_number(catalog.popularity()[i]) << ',' << format_number(catalog.theta()[i]) << '\n';
}

} // namespace cbcast
