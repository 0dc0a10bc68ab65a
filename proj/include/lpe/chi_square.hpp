#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpe {

namespace detail {

/// Lower regularized incomplete gamma P(a,x) by power series, valid for
/// x < a + 1 where the series converges quickly.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Upper regularized incomplete gamma Q(a,x) by continued fraction
/// (modified Lentz), valid for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

/// Upper regularized incomplete gamma Q(a, x) = Γ(a,x)/Γ(a).
inline double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma_q: a must be > 0");
  if (!(x >= 0.0)) throw std::invalid_argument("gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

/// Survival function of the chi-square distribution with df degrees of
/// freedom: P(X > x) = Q(df/2, x/2). The series branch is taken for
/// x < df + 1, the continued-fraction branch otherwise.
inline double chisq_survival(double x, int df) {
  if (df < 1) throw std::invalid_argument("chisq_survival: df must be >= 1");
  if (!(x >= 0.0)) throw std::invalid_argument("chisq_survival: x must be >= 0");
  if (x == 0.0) return 1.0;
  const double a = 0.5 * static_cast<double>(df);
  const double z = 0.5 * x;
  double q;
  if (x < static_cast<double>(df) + 1.0) {
    q = 1.0 - detail::gamma_p_series(a, z);
  } else {
    q = detail::gamma_q_cf(a, z);
  }
  if (q < 0.0) q = 0.0;
  if (q > 1.0) q = 1.0;
  return q;
}

}  // namespace lpe
