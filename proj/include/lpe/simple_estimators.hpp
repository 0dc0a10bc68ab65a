#pragma once

#include <span>
#include <stdexcept>

namespace lpe {

/// Scaled realized volatility on a block of k returns out of a sample of n
/// over [0, T]: (n / (T * k)) * sum of squared returns. Linear in the sense
/// that the full-sample value is the size-weighted mean of sub-block values.
inline double scaled_rv(std::span<const double> returns, std::size_t k,
                        std::size_t n, double T) {
  if (returns.empty()) throw std::invalid_argument("scaled_rv: empty input");
  if (returns.size() != k)
    throw std::invalid_argument("scaled_rv: k must equal the number of returns");
  if (!(T > 0.0)) throw std::invalid_argument("scaled_rv: T must be > 0");
  double ss = 0.0;
  for (double r : returns) ss += r * r;
  return ss * static_cast<double>(n) / (T * static_cast<double>(k));
}

/// Mean of interval counts, the rate estimator for counting data.
inline double poisson_mean(std::span<const double> counts) {
  if (counts.empty()) throw std::invalid_argument("poisson_mean: empty input");
  double s = 0.0;
  for (double c : counts) s += c;
  return s / static_cast<double>(counts.size());
}

}  // namespace lpe
