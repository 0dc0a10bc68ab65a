#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lpe {

/// Event stream of observed price changes on a tick grid. Entry i holds the
/// i-th change of the observed price: its time, the resulting price (stored
/// in integer tick counts so tick-grid arithmetic stays exact), the absolute
/// change in ticks, and its direction. initial_price_ticks is the observed
/// price before the first change.
struct TickSeries {
  double tick = 0.0;
  double horizon = 0.0;
  std::int64_t initial_price_ticks = 0;
  std::vector<double> times;
  std::vector<std::int64_t> price_ticks;
  std::vector<int> jump_ticks;
  std::vector<int> directions;

  std::size_t size() const { return times.size(); }
  double price(std::size_t i) const {
    return static_cast<double>(price_ticks[i]) * tick;
  }
  double initial_price() const {
    return static_cast<double>(initial_price_ticks) * tick;
  }
};

inline void validate(const TickSeries& ts) {
  if (!(ts.tick > 0.0)) throw std::invalid_argument("TickSeries: tick must be > 0");
  const std::size_t n = ts.times.size();
  if (ts.price_ticks.size() != n || ts.jump_ticks.size() != n ||
      ts.directions.size() != n)
    throw std::invalid_argument("TickSeries: field length mismatch");
  std::int64_t prev_price = ts.initial_price_ticks;
  double prev_time = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(ts.times[i] > prev_time))
      throw std::invalid_argument("TickSeries: times must be strictly increasing");
    if (ts.jump_ticks[i] < 1)
      throw std::invalid_argument("TickSeries: jump sizes must be >= 1 tick");
    if (ts.directions[i] != 1 && ts.directions[i] != -1)
      throw std::invalid_argument("TickSeries: directions must be +1 or -1");
    if (ts.price_ticks[i] - prev_price !=
        static_cast<std::int64_t>(ts.directions[i]) * ts.jump_ticks[i])
      throw std::invalid_argument("TickSeries: price increments inconsistent");
    prev_price = ts.price_ticks[i];
    prev_time = ts.times[i];
  }
  if (ts.horizon > 0.0 && n > 0 && ts.times.back() > ts.horizon * (1.0 + 1e-12))
    throw std::invalid_argument("TickSeries: event time beyond horizon");
}

}  // namespace lpe
