#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace lpe {

struct SimplexResult {
  Eigen::VectorXd x;
  double fval = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead simplex minimizer. Convergence is declared
/// when the simplex diameter (max coordinate spread) falls below diam_tol.
/// Non-finite objective values are treated as +infinity.
inline SimplexResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const Eigen::VectorXd& steps,
    double diam_tol = 1e-8, int max_iter = 10000) {
  const Eigen::Index n = x0.size();
  const auto safe_f = [&](const Eigen::VectorXd& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(n) + 1, x0);
  std::vector<double> fs(static_cast<std::size_t>(n) + 1);
  for (Eigen::Index i = 0; i < n; ++i) xs[static_cast<std::size_t>(i) + 1][i] += steps[i];
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = safe_f(xs[i]);

  std::vector<std::size_t> order(xs.size());
  const auto sort_simplex = [&] {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<Eigen::VectorXd> xs2(xs.size());
    std::vector<double> fs2(fs.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      xs2[i] = xs[order[i]];
      fs2[i] = fs[order[i]];
    }
    xs.swap(xs2);
    fs.swap(fs2);
  };

  const auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i)
      d = std::max(d, (xs[i] - xs[0]).cwiseAbs().maxCoeff());
    return d;
  };

  int iter = 0;
  sort_simplex();
  for (; iter < max_iter; ++iter) {
    if (diameter() < diam_tol) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) centroid += xs[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd& worst = xs.back();
    Eigen::VectorXd xr = centroid + (centroid - worst);  // reflection
    double fr = safe_f(xr);

    if (fr < fs[0]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst);  // expansion
      const double fe = safe_f(xe);
      if (fe < fr) {
        xs.back() = std::move(xe);
        fs.back() = fe;
      } else {
        xs.back() = std::move(xr);
        fs.back() = fr;
      }
    } else if (fr < fs[fs.size() - 2]) {
      xs.back() = std::move(xr);
      fs.back() = fr;
    } else {
      const bool outside = fr < fs.back();
      Eigen::VectorXd xc = outside ? centroid + 0.5 * (xr - centroid)
                                   : centroid - 0.5 * (centroid - worst);
      const double fc = safe_f(xc);
      if (fc < std::min(fr, fs.back())) {
        xs.back() = std::move(xc);
        fs.back() = fc;
      } else {  // shrink toward the best vertex
        for (std::size_t i = 1; i < xs.size(); ++i) {
          xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
          fs[i] = safe_f(xs[i]);
        }
      }
    }
    sort_simplex();
  }

  SimplexResult out;
  out.x = xs[0];
  out.fval = fs[0];
  out.iterations = iter;
  out.converged = diameter() < diam_tol;
  return out;
}

}  // namespace lpe
