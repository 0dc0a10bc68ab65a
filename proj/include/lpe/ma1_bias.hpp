#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpe/ma1.hpp"
#include "lpe/parallel.hpp"
#include "lpe/rng.hpp"

namespace lpe {

/// Which MA(1) fit a bias entry refers to.
enum class Ma1MleVariant {
  FullMle,    ///< mu estimated alongside (beta, kappa)
  FixedMuMle  ///< mu fixed at 0
};

/// Monte Carlo tabulation of the finite-sample bias of the MA(1) MLE on a
/// grid of beta values and sample sizes h, at unit innovation variance.
/// Structural facts used by the lookup: the bias of mu is 0 by symmetry, the
/// bias of beta does not depend on (mu, kappa), and the bias of kappa is
/// proportional to kappa. Values are interpolated linearly in beta and in
/// 1/h; beyond the largest tabulated h the bias is interpolated toward the
/// anchor (1/h = 0, bias = 0).
struct Ma1BiasTable {
  struct VariantGrid {
    std::vector<double> bias_beta;   // row-major [h][beta]
    std::vector<double> bias_kappa;  // per unit kappa
    std::vector<double> se_beta;
    std::vector<double> se_kappa;
  };

  std::vector<int> h_grid;        // ascending
  std::vector<double> beta_grid;  // ascending
  VariantGrid mle;                // mu estimated
  VariantGrid mle_mu0;            // mu fixed at 0
  std::vector<double> bias_mu;    // mu-estimated variant, diagnostic only
  std::vector<double> se_mu;

  std::size_t cells() const { return h_grid.size() * beta_grid.size(); }

  const VariantGrid& grid(Ma1MleVariant v) const {
    return v == Ma1MleVariant::FullMle ? mle : mle_mu0;
  }

  struct Entry {
    double bias_beta = 0.0;
    double bias_kappa_per_kappa = 0.0;
    double se_beta = 0.0;
    double se_kappa = 0.0;
  };

  /// Interpolated bias at (beta, h). beta is clamped to the tabulated range;
  /// h below the smallest tabulated value is an error.
  Entry lookup(Ma1MleVariant variant, double beta, int h) const {
    if (h_grid.empty() || beta_grid.empty())
      throw std::logic_error("Ma1BiasTable: empty table");
    if (h < h_grid.front())
      throw std::out_of_range("Ma1BiasTable: h below tabulation range");
    const VariantGrid& g = grid(variant);

    beta = std::clamp(beta, beta_grid.front(), beta_grid.back());
    std::size_t jb = 0;
    while (jb + 2 < beta_grid.size() && beta_grid[jb + 1] < beta) ++jb;
    const double b0 = beta_grid[jb], b1 = beta_grid[jb + 1];
    const double wb = (beta - b0) / (b1 - b0);

    const auto at = [&](const std::vector<double>& grid_vals, std::size_t jh) {
      const std::size_t nb = beta_grid.size();
      return (1.0 - wb) * grid_vals[jh * nb + jb] + wb * grid_vals[jh * nb + jb + 1];
    };

    // Position in 1/h; beyond h_grid.back() interpolate toward (0, 0).
    const double x = 1.0 / static_cast<double>(h);
    Entry e;
    if (h >= h_grid.back()) {
      const std::size_t jh = h_grid.size() - 1;
      const double scale = static_cast<double>(h_grid.back()) / static_cast<double>(h);
      e.bias_beta = at(g.bias_beta, jh) * scale;
      e.bias_kappa_per_kappa = at(g.bias_kappa, jh) * scale;
      e.se_beta = at(g.se_beta, jh) * scale;
      e.se_kappa = at(g.se_kappa, jh) * scale;
      return e;
    }
    std::size_t jh = 0;
    while (jh + 2 < h_grid.size() && h_grid[jh + 1] < h) ++jh;
    const double x0 = 1.0 / static_cast<double>(h_grid[jh]);
    const double x1 = 1.0 / static_cast<double>(h_grid[jh + 1]);
    const double wh = (x - x0) / (x1 - x0);
    e.bias_beta = (1.0 - wh) * at(g.bias_beta, jh) + wh * at(g.bias_beta, jh + 1);
    e.bias_kappa_per_kappa =
        (1.0 - wh) * at(g.bias_kappa, jh) + wh * at(g.bias_kappa, jh + 1);
    e.se_beta = (1.0 - wh) * at(g.se_beta, jh) + wh * at(g.se_beta, jh + 1);
    e.se_kappa = (1.0 - wh) * at(g.se_kappa, jh) + wh * at(g.se_kappa, jh + 1);
    return e;
  }
};

/// Default grids: 21 beta points spanning [-0.95, 0.95] and the block sizes
/// the tabulation is meant to serve.
inline std::vector<double> ma1_bias_default_beta_grid() {
  std::vector<double> betas(21);
  for (int j = 0; j < 21; ++j) betas[static_cast<std::size_t>(j)] = -0.95 + 0.095 * j;
  betas[10] = 0.0;
  return betas;
}

inline std::vector<int> ma1_bias_default_h_grid() {
  return {25, 50, 100, 200, 500, 1000};
}

/// Monte Carlo tabulation of the MLE bias: for every (h, beta) cell, `reps`
/// series of length h are simulated at (mu, kappa) = (0, 1) and both MLE
/// variants are fitted. Deterministic given the seed, independent of the
/// thread count.
inline Ma1BiasTable generate_ma1_bias_table(
    int reps, std::uint64_t seed, int threads = 0,
    std::vector<int> h_grid = ma1_bias_default_h_grid(),
    std::vector<double> beta_grid = ma1_bias_default_beta_grid()) {
  if (reps < 1000)
    throw std::invalid_argument("generate_ma1_bias_table: reps < 1000 is too noisy");
  Ma1BiasTable table;
  table.h_grid = std::move(h_grid);
  table.beta_grid = std::move(beta_grid);
  const std::size_t n_cells = table.cells();
  const auto resize_all = [&](Ma1BiasTable::VariantGrid& g) {
    g.bias_beta.assign(n_cells, 0.0);
    g.bias_kappa.assign(n_cells, 0.0);
    g.se_beta.assign(n_cells, 0.0);
    g.se_kappa.assign(n_cells, 0.0);
  };
  resize_all(table.mle);
  resize_all(table.mle_mu0);
  table.bias_mu.assign(n_cells, 0.0);
  table.se_mu.assign(n_cells, 0.0);

  parallel_for(n_cells, threads, [&](std::size_t cell) {
    const std::size_t nb = table.beta_grid.size();
    const int h = table.h_grid[cell / nb];
    const double beta = table.beta_grid[cell % nb];
    const std::uint64_t cell_seed = derive_seed(seed, cell);

    double s_mu = 0.0, s2_mu = 0.0;
    double s_b3 = 0.0, s2_b3 = 0.0, s_k3 = 0.0, s2_k3 = 0.0;
    double s_b2 = 0.0, s2_b2 = 0.0, s_k2 = 0.0, s2_k2 = 0.0;
    std::vector<double> data(static_cast<std::size_t>(h));
    for (int r = 0; r < reps; ++r) {
      Rng rng(derive_seed(cell_seed, static_cast<std::uint64_t>(r)));
      double lag = rng.normal();
      for (int i = 0; i < h; ++i) {
        const double eps = rng.normal();
        data[static_cast<std::size_t>(i)] = eps + beta * lag;
        lag = eps;
      }
      const Ma1Fit f3 = ma1_mle(data, {.fix_mu = false});
      const Ma1Fit f2 = ma1_mle(data, {.fix_mu = true});
      const double db3 = f3.params.beta - beta, dk3 = f3.params.kappa - 1.0;
      const double db2 = f2.params.beta - beta, dk2 = f2.params.kappa - 1.0;
      s_mu += f3.params.mu;
      s2_mu += f3.params.mu * f3.params.mu;
      s_b3 += db3;
      s2_b3 += db3 * db3;
      s_k3 += dk3;
      s2_k3 += dk3 * dk3;
      s_b2 += db2;
      s2_b2 += db2 * db2;
      s_k2 += dk2;
      s2_k2 += dk2 * dk2;
    }
    const double nr = static_cast<double>(reps);
    const auto finish = [&](double s, double s2, double& bias, double& se) {
      bias = s / nr;
      const double var = std::max(0.0, (s2 - s * s / nr) / (nr - 1.0));
      se = std::sqrt(var / nr);
    };
    finish(s_mu, s2_mu, table.bias_mu[cell], table.se_mu[cell]);
    finish(s_b3, s2_b3, table.mle.bias_beta[cell], table.mle.se_beta[cell]);
    finish(s_k3, s2_k3, table.mle.bias_kappa[cell], table.mle.se_kappa[cell]);
    finish(s_b2, s2_b2, table.mle_mu0.bias_beta[cell], table.mle_mu0.se_beta[cell]);
    finish(s_k2, s2_k2, table.mle_mu0.bias_kappa[cell], table.mle_mu0.se_kappa[cell]);
  });
  return table;
}

namespace detail {
const Ma1BiasTable& builtin_ma1_bias_table();
}

/// First-order bias of the MA(1) MLE at sample size h, as the vector
/// (bias_mu, bias_beta, bias_kappa). bias_mu is 0 by the symmetry of the
/// Gaussian likelihood; bias_kappa scales linearly in kappa.
inline Eigen::Vector3d ma1_bias(const Ma1Params& p, int h,
                                const Ma1BiasTable& table,
                                Ma1MleVariant variant = Ma1MleVariant::FullMle) {
  validate(p);
  const Ma1BiasTable::Entry e = table.lookup(variant, p.beta, h);
  return {0.0, e.bias_beta, p.kappa * e.bias_kappa_per_kappa};
}

inline Eigen::Vector3d ma1_bias(const Ma1Params& p, int h) {
  return ma1_bias(p, h, detail::builtin_ma1_bias_table());
}

/// Bias-corrected MLE: fit, then subtract the tabulated bias evaluated at
/// the fitted parameters, clamping beta back into (-1, 1) and kappa above 0
/// if the correction overshoots.
inline Ma1Fit ma1_mle_bc(std::span<const double> data,
                         const Ma1BiasTable& table,
                         const Ma1MleOptions& opt = {}) {
  Ma1Fit fit = ma1_mle(data, opt);
  const Ma1MleVariant variant =
      opt.fix_mu ? Ma1MleVariant::FixedMuMle : Ma1MleVariant::FullMle;
  const Eigen::Vector3d b =
      ma1_bias(fit.params, static_cast<int>(data.size()), table, variant);
  fit.params.beta = std::clamp(fit.params.beta - b[1], -1.0 + 1e-10, 1.0 - 1e-10);
  fit.params.kappa = std::max(fit.params.kappa - b[2], 1e-12);
  return fit;
}

inline Ma1Fit ma1_mle_bc(std::span<const double> data,
                         const Ma1MleOptions& opt = {}) {
  return ma1_mle_bc(data, detail::builtin_ma1_bias_table(), opt);
}

/// Serializes the tabulation as CSV with one row per (variant, h, beta).
inline void write_ma1_bias_csv(const Ma1BiasTable& table, std::ostream& os) {
  os << "variant,h,beta,bias_mu,bias_beta,bias_kappa_per_unit_kappa,"
        "se_mu,se_beta,se_kappa\n";
  const auto row = [&](const char* name, const Ma1BiasTable::VariantGrid& g,
                       bool with_mu) {
    const std::size_t nb = table.beta_grid.size();
    for (std::size_t jh = 0; jh < table.h_grid.size(); ++jh) {
      for (std::size_t jb = 0; jb < nb; ++jb) {
        const std::size_t c = jh * nb + jb;
        os << name << ',' << table.h_grid[jh] << ',';
        write_csv_double(os, table.beta_grid[jb]);
        os << ',';
        write_csv_double(os, with_mu ? table.bias_mu[c] : 0.0);
        os << ',';
        write_csv_double(os, g.bias_beta[c]);
        os << ',';
        write_csv_double(os, g.bias_kappa[c]);
        os << ',';
        write_csv_double(os, with_mu ? table.se_mu[c] : 0.0);
        os << ',';
        write_csv_double(os, g.se_beta[c]);
        os << ',';
        write_csv_double(os, g.se_kappa[c]);
        os << '\n';
      }
    }
  };
  row("mle", table.mle, true);
  row("mle-mu0", table.mle_mu0, false);
}

}  // namespace lpe
