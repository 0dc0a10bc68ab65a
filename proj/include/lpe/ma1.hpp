#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>

#include "lpe/nelder_mead.hpp"

namespace lpe {

/// Gaussian MA(1) parameters: observations y_i = mu + e_i + beta * e_{i-1}
/// with e_i iid N(0, kappa).
struct Ma1Params {
  double mu = 0.0;
  double beta = 0.0;
  double kappa = 1.0;
};

inline void validate(const Ma1Params& p) {
  if (!std::isfinite(p.mu))
    throw std::invalid_argument("Ma1Params: mu must be finite");
  if (!(std::fabs(p.beta) < 1.0))
    throw std::invalid_argument("Ma1Params: |beta| must be < 1");
  if (!(p.kappa > 0.0))
    throw std::invalid_argument("Ma1Params: kappa must be > 0");
}

/// Exact Gaussian MA(1) log-likelihood in O(n) by the innovations
/// (one-step-prediction) recursion. With gamma_0 = kappa*(1+beta^2) and
/// gamma_1 = beta*kappa, the scaled prediction variance r_t satisfies
/// r_1 = 1 + beta^2, r_{t+1} = 1 + beta^2 - beta^2 / r_t.
inline double ma1_loglik(const Ma1Params& p, std::span<const double> data) {
  validate(p);
  if (data.empty()) throw std::invalid_argument("ma1_loglik: empty data");
  const double b2 = p.beta * p.beta;
  const double log_2pi_kappa = std::log(2.0 * std::numbers::pi) + std::log(p.kappa);
  double r = 1.0 + b2;
  double pred = 0.0;
  double ll = 0.0;
  for (double y : data) {
    if (!std::isfinite(y))
      throw std::invalid_argument("ma1_loglik: non-finite data");
    const double e = (y - p.mu) - pred;
    ll -= 0.5 * (log_2pi_kappa + std::log(r) + e * e / (p.kappa * r));
    const double theta = p.beta / r;
    pred = theta * e;
    r = 1.0 + b2 - p.beta * theta;
  }
  return ll;
}

struct Ma1MleOptions {
  bool fix_mu = false;   ///< estimate (beta, kappa) with mu fixed at 0
  double diam_tol = 1e-8;
  int max_iter = 10000;
};

struct Ma1Fit {
  Ma1Params params;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Maximum-likelihood fit of the MA(1) by Nelder-Mead simplex search in the
/// unconstrained coordinates (mu, atanh beta, ln kappa), started from
/// method-of-moments values. Non-convergence within max_iter is reported via
/// Ma1Fit::converged with the best point attached.
inline Ma1Fit ma1_mle(std::span<const double> data,
                      const Ma1MleOptions& opt = {}) {
  const std::size_t n = data.size();
  if (n < 4) throw std::invalid_argument("ma1_mle: need at least 4 observations");
  for (double y : data)
    if (!std::isfinite(y)) throw std::invalid_argument("ma1_mle: non-finite data");

  double mean = 0.0;
  if (!opt.fix_mu) {
    for (double y : data) mean += y;
    mean /= static_cast<double>(n);
  }
  double g0 = 0.0, g1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = data[i] - mean;
    g0 += xi * xi;
    if (i > 0) g1 += xi * (data[i - 1] - mean);
  }
  g0 /= static_cast<double>(n);
  g1 /= static_cast<double>(n);
  if (!(g0 > 0.0))
    throw std::invalid_argument("ma1_mle: degenerate data (zero sample variance)");

  const double rho = g1 / g0;
  double beta0;
  if (std::fabs(rho) >= 0.5) {
    beta0 = rho > 0.0 ? 0.95 : -0.95;
  } else if (rho == 0.0) {
    beta0 = 0.0;
  } else {
    beta0 = (1.0 - std::sqrt(1.0 - 4.0 * rho * rho)) / (2.0 * rho);
  }
  const double kappa0 = g0 / (1.0 + beta0 * beta0);

  // Pack as (mu, atanh beta, ln kappa), dropping mu when it is fixed.
  const bool with_mu = !opt.fix_mu;
  const Eigen::Index dim = with_mu ? 3 : 2;
  Eigen::VectorXd x0(dim), steps(dim);
  Eigen::Index k = 0;
  if (with_mu) {
    x0[k] = mean;
    steps[k] = 0.25 * std::sqrt(g0);
    ++k;
  }
  x0[k] = std::atanh(beta0);
  steps[k] = 0.25;
  ++k;
  x0[k] = std::log(kappa0);
  steps[k] = 0.25;

  const auto unpack = [&](const Eigen::VectorXd& x) {
    Ma1Params p;
    Eigen::Index j = 0;
    p.mu = with_mu ? x[j++] : 0.0;
    p.beta = std::tanh(x[j++]);
    p.kappa = std::exp(x[j]);
    return p;
  };
  const auto objective = [&](const Eigen::VectorXd& x) -> double {
    const Ma1Params p = unpack(x);
    if (!(std::fabs(p.beta) < 1.0) || !(p.kappa > 0.0) ||
        !std::isfinite(p.kappa) || !std::isfinite(p.mu))
      return std::numeric_limits<double>::infinity();
    return -ma1_loglik(p, data);
  };

  const SimplexResult res =
      nelder_mead(objective, x0, steps, opt.diam_tol, opt.max_iter);
  Ma1Fit fit;
  fit.params = unpack(res.x);
  fit.loglik = -res.fval;
  fit.iterations = res.iterations;
  fit.converged = res.converged;
  return fit;
}

/// Asymptotic covariance of the MA(1) MLE at sample size h: the inverse
/// expected Fisher information diag(kappa*(1+beta)^2, 1-beta^2, 2*kappa^2)
/// scaled by 1/h.
inline Eigen::Matrix3d ma1_asy_variance(const Ma1Params& p, int h) {
  validate(p);
  if (h < 1) throw std::invalid_argument("ma1_asy_variance: h must be >= 1");
  const double omb2 = 1.0 - p.beta * p.beta;
  if (omb2 < 1e-10)
    throw std::domain_error("ma1_asy_variance: information singular as |beta| -> 1");
  Eigen::Matrix3d v = Eigen::Matrix3d::Zero();
  v(0, 0) = p.kappa * (1.0 + p.beta) * (1.0 + p.beta);
  v(1, 1) = omb2;
  v(2, 2) = 2.0 * p.kappa * p.kappa;
  return v / static_cast<double>(h);
}

/// Volatility/noise pair for the equivalence between a noisy diffusion
/// sampled at n regular times over [0, T] and a local MA(1): sigma2 is the
/// variance rate of the efficient price, v the noise variance scale.
struct VolNoisePair {
  double sigma2 = 0.0;
  double v = 0.0;
  long n = 0;
  double T = 0.0;
};

/// The map G(x) = -1/x - x on (-1, 0); G(beta) = sigma2*T/v + 2 links the
/// MA(1) coefficient to the signal-to-noise ratio.
inline double ma1_noise_g(double x) { return -1.0 / x - x; }

/// Maps (sigma2, v) to MA(1) parameters matching the return moments
/// Var = (sigma2*T + 2v)/n and lag-1 covariance -v/n exactly.
inline Ma1Params vol_to_ma1(const VolNoisePair& pair) {
  if (!(pair.sigma2 > 0.0) || !(pair.v > 0.0) || !(pair.T > 0.0) || pair.n < 1)
    throw std::invalid_argument("vol_to_ma1: requires sigma2, v, T > 0 and n >= 1");
  const double g = pair.sigma2 * pair.T / pair.v + 2.0;
  // Root of beta^2 + g*beta + 1 = 0 inside (-1, 0), in cancellation-free form.
  const double beta = -2.0 / (g + std::sqrt(g * g - 4.0));
  if (!(beta > -1.0 && beta < 0.0))
    throw std::domain_error("vol_to_ma1: root outside (-1, 0)");
  Ma1Params p;
  p.mu = 0.0;
  p.beta = beta;
  p.kappa = -pair.v / (static_cast<double>(pair.n) * beta);
  return p;
}

/// Inverse of vol_to_ma1. Defined only for beta in (-1, 0); nonnegative beta
/// signals no detectable noise under this model.
inline VolNoisePair ma1_to_vol(const Ma1Params& p, long n, double T) {
  if (!(p.kappa > 0.0)) throw std::invalid_argument("ma1_to_vol: kappa must be > 0");
  if (!(T > 0.0) || n < 1)
    throw std::invalid_argument("ma1_to_vol: requires T > 0 and n >= 1");
  if (!(p.beta > -1.0 && p.beta < 0.0))
    throw std::domain_error(
        "ma1_to_vol: requires beta in (-1, 0); beta >= 0 indicates no detectable noise");
  VolNoisePair out;
  out.n = n;
  out.T = T;
  out.v = -static_cast<double>(n) * p.beta * p.kappa;
  out.sigma2 = (ma1_noise_g(p.beta) - 2.0) * out.v / T;
  return out;
}

}  // namespace lpe
