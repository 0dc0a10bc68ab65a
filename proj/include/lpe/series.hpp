#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lpe {

/// A series of observed returns with per-observation time increments.
/// This is the universal input of the block estimators: values[i] is the
/// i-th scalar observable, dts[i] the time elapsed since the previous
/// observation, horizon the total observation window [0, T].
struct ObservationSeries {
  std::vector<double> values;
  std::vector<double> dts;
  double horizon = 0.0;

  std::size_t size() const { return values.size(); }

  double total_time() const {
    double s = 0.0;
    for (double dt : dts) s += dt;
    return s;
  }
};

inline void validate(const ObservationSeries& series) {
  if (series.values.empty())
    throw std::invalid_argument("ObservationSeries: empty series");
  if (series.values.size() != series.dts.size())
    throw std::invalid_argument("ObservationSeries: values/dts length mismatch");
  if (!(series.horizon > 0.0))
    throw std::invalid_argument("ObservationSeries: horizon must be > 0");
  double sum = 0.0;
  for (double dt : series.dts) {
    if (!(dt > 0.0))
      throw std::invalid_argument("ObservationSeries: all dts must be > 0");
    sum += dt;
  }
  if (sum > series.horizon * (1.0 + 1e-9))
    throw std::invalid_argument("ObservationSeries: dts sum exceeds horizon");
}

/// Builds a regularly sampled series with dt = T/n.
inline ObservationSeries make_regular_series(std::vector<double> values,
                                             double horizon) {
  ObservationSeries s;
  const double dt = horizon / static_cast<double>(values.size());
  s.dts.assign(values.size(), dt);
  s.values = std::move(values);
  s.horizon = horizon;
  return s;
}

}  // namespace lpe
