// Monte Carlo point estimates.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace polywalk::sim {

struct Estimate {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();  // NaN unless n > 1
  std::uint64_t n = 0;

  bool defined() const { return n > 1; }

  /// |mean - exact| <= k standard errors, plus 1e-12 relative so that a
  /// zero-variance sample still matches a closed form off by rounding.
  bool within(double exact, double k = 4.0) const {
    if (!defined()) return false;
    return std::abs(mean - exact) <= k * std_error + 1e-12 * std::abs(exact);
  }

  /// within() for a proportion, using the standard error at the exact value,
  /// sqrt(exact (1 - exact) / n). The sample version is zero whenever a rare
  /// event never occurs, however far the exact value is from 0.
  bool proportion_within(double exact, double k = 4.0) const {
    if (!defined()) return false;
    const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(n));
    return std::abs(mean - exact) <= k * se + 1e-12 * std::abs(exact);
  }
};

/// Sums of a non-negative integer observable, kept exact so that merging
/// shards in any grouping yields the same bits.
class IntegerTally {
 public:
  void add(std::uint64_t x) {
    ++n_;
    sum_ += x;
    sum_sq_ += static_cast<unsigned __int128>(x) * x;
  }

  void merge(const IntegerTally& o) {
    n_ += o.n_;
    sum_ += o.sum_;
    sum_sq_ += o.sum_sq_;
  }

  std::uint64_t count() const { return n_; }
  std::uint64_t sum() const { return sum_; }

  Estimate estimate() const {
    Estimate e;
    e.n = n_;
    if (n_ == 0) return e;
    e.mean = static_cast<double>(static_cast<long double>(sum_) / n_);
    if (n_ < 2) return e;
    // n * sum(x^2) - sum(x)^2, exact in 128 bits for the sample sizes used here.
    const unsigned __int128 s = sum_;
    const unsigned __int128 spread = static_cast<unsigned __int128>(n_) * sum_sq_ - s * s;
    const long double var = static_cast<long double>(spread) / (static_cast<long double>(n_) * (n_ - 1));
    e.std_error = static_cast<double>(std::sqrt(var / n_));
    return e;
  }

 private:
  std::uint64_t n_ = 0;
  std::uint64_t sum_ = 0;
  unsigned __int128 sum_sq_ = 0;
};

}  // namespace polywalk::sim
