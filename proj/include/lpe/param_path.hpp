#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lpe/rng.hpp"

namespace lpe {

/// Constant parameter path theta_t = theta0.
struct ConstantPath {
  Eigen::VectorXd theta0;
};

/// Deterministic oscillating path theta_t = nu + amp .* cos(2*pi*t*osc/T).
struct CosinePath {
  Eigen::VectorXd nu;
  Eigen::VectorXd amp;
  Eigen::VectorXd osc;
};

/// Driftless martingale path d theta = vol .* dW, discretized by Euler steps
/// on the sampling grid. Components flagged in reflect_positive are kept
/// above reflect_floor by reflection (x -> floor + |x - floor|), for
/// variance-like coordinates that must stay positive.
struct MartingalePath {
  Eigen::VectorXd theta0;
  Eigen::VectorXd vol;
  std::vector<bool> reflect_positive;  // empty means no reflection
  double reflect_floor = 1e-8;
};

/// Declarative description of a time-varying parameter path.
struct ParamPathSpec {
  std::variant<ConstantPath, CosinePath, MartingalePath> kind;

  int dim() const {
    return static_cast<int>(std::visit(
        [](const auto& k) -> Eigen::Index {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, ConstantPath>) return k.theta0.size();
          if constexpr (std::is_same_v<K, CosinePath>) return k.nu.size();
          if constexpr (std::is_same_v<K, MartingalePath>) return k.theta0.size();
        },
        kind));
  }

  bool is_deterministic() const {
    return !std::holds_alternative<MartingalePath>(kind);
  }

  static ParamPathSpec constant(Eigen::VectorXd theta0) {
    return ParamPathSpec{ConstantPath{std::move(theta0)}};
  }
  static ParamPathSpec cosine(Eigen::VectorXd nu, Eigen::VectorXd amp,
                              Eigen::VectorXd osc) {
    if (amp.size() != nu.size() || osc.size() != nu.size())
      throw std::invalid_argument("cosine path: nu/amp/osc dimension mismatch");
    return ParamPathSpec{CosinePath{std::move(nu), std::move(amp), std::move(osc)}};
  }
  static ParamPathSpec martingale(Eigen::VectorXd theta0, Eigen::VectorXd vol,
                                  std::vector<bool> reflect_positive = {},
                                  double reflect_floor = 1e-8) {
    if (vol.size() != theta0.size())
      throw std::invalid_argument("martingale path: theta0/vol dimension mismatch");
    if ((vol.array() < 0.0).any())
      throw std::invalid_argument("martingale path: vol must be >= 0");
    return ParamPathSpec{
        MartingalePath{std::move(theta0), std::move(vol),
                       std::move(reflect_positive), reflect_floor}};
  }
};

/// A parameter path sampled on a time grid.
struct ParamPath {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> values;
  ParamPathSpec spec;
};

/// Evaluates a deterministic (constant or cosine) path at an arbitrary time.
inline Eigen::VectorXd path_value_at(const ParamPathSpec& spec, double t,
                                     double T) {
  if (const auto* c = std::get_if<ConstantPath>(&spec.kind)) return c->theta0;
  if (const auto* c = std::get_if<CosinePath>(&spec.kind)) {
    Eigen::VectorXd v = c->nu;
    for (Eigen::Index k = 0; k < v.size(); ++k)
      v[k] += c->amp[k] * std::cos(2.0 * std::numbers::pi * t * c->osc[k] / T);
    return v;
  }
  throw std::invalid_argument("path_value_at: martingale paths must be sampled");
}

/// Samples the path on the given strictly increasing grid in [0, T].
/// Deterministic given (spec, grid, seed).
inline ParamPath sample_path(const ParamPathSpec& spec,
                             const std::vector<double>& grid, double T,
                             std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("sample_path: empty grid");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (grid[j] < 0.0 || grid[j] > T * (1.0 + 1e-12))
      throw std::invalid_argument("sample_path: grid point outside [0, T]");
    if (j > 0 && !(grid[j] > grid[j - 1]))
      throw std::invalid_argument("sample_path: grid must be strictly increasing");
  }
  ParamPath path;
  path.times = grid;
  path.spec = spec;
  path.values.reserve(grid.size());

  if (const auto* m = std::get_if<MartingalePath>(&spec.kind)) {
    Rng rng(seed);
    Eigen::VectorXd theta = m->theta0;
    const auto reflect = [&](Eigen::VectorXd& v) {
      for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (k < static_cast<Eigen::Index>(m->reflect_positive.size()) &&
            m->reflect_positive[static_cast<std::size_t>(k)]) {
          v[k] = m->reflect_floor + std::fabs(v[k] - m->reflect_floor);
        }
      }
    };
    reflect(theta);
    path.values.push_back(theta);
    for (std::size_t j = 1; j < grid.size(); ++j) {
      const double sdt = std::sqrt(grid[j] - grid[j - 1]);
      for (Eigen::Index k = 0; k < theta.size(); ++k)
        theta[k] += m->vol[k] * sdt * rng.normal();
      reflect(theta);
      path.values.push_back(theta);
    }
    return path;
  }

  for (double t : grid) path.values.push_back(path_value_at(spec, t, T));
  return path;
}

/// Time average (1/T) * integral of the sampled path over [0, T], by the
/// trapezoidal rule. The grid must start at 0 and end at T.
inline Eigen::VectorXd integrated_parameter(const ParamPath& path, double T) {
  if (path.times.size() < 2)
    throw std::invalid_argument("integrated_parameter: need at least 2 grid points");
  const double tol = 1e-9 * std::max(1.0, T);
  if (std::fabs(path.times.front()) > tol ||
      std::fabs(path.times.back() - T) > tol)
    throw std::invalid_argument("integrated_parameter: path must cover [0, T]");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(path.values.front().size());
  for (std::size_t j = 1; j < path.times.size(); ++j) {
    const double dt = path.times[j] - path.times[j - 1];
    acc += 0.5 * dt * (path.values[j] + path.values[j - 1]);
  }
  return acc / T;
}

/// n_points equally spaced grid points covering [0, T] (n_points >= 2).
inline std::vector<double> linspace_grid(std::size_t n_points, double T) {
  if (n_points < 2) throw std::invalid_argument("linspace_grid: need >= 2 points");
  std::vector<double> g(n_points);
  for (std::size_t j = 0; j < n_points; ++j)
    g[j] = T * static_cast<double>(j) / static_cast<double>(n_points - 1);
  g.back() = T;
  return g;
}

}  // namespace lpe
