#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lpe/chi_square.hpp"
#include "lpe/series.hpp"

namespace lpe {

/// Assignment of observations to contiguous blocks of h observations.
/// Every block holds exactly h observations except possibly the last.
struct BlockPartition {
  int h = 0;
  std::size_t n_blocks = 0;
  /// Half-open index ranges [first, second) into the observation series.
  std::vector<std::pair<std::size_t, std::size_t>> boundaries;
  /// Sum of the time increments of the observations in each block.
  std::vector<double> block_lengths;
};

/// Parametric estimate on one block: the fitted parameter vector and,
/// optionally, an estimate of the block estimator's normalized covariance.
struct LocalEstimate {
  Eigen::VectorXd theta;
  std::optional<Eigen::MatrixXd> variance;
  std::size_t block_index = 0;
};

/// Result of block-wise estimation: the aggregated integrated-parameter
/// estimate, the optional aggregated asymptotic variance, and the per-block
/// inputs that produced them.
struct LpeResult {
  Eigen::VectorXd theta_hat;
  std::optional<Eigen::MatrixXd> av_hat;
  BlockPartition partition;
  std::vector<LocalEstimate> locals;
};

/// Outcome of the parameter-constancy chi-square test.
struct ConstancyTest {
  double stat = 0.0;
  int df = 0;
  double pvalue = 1.0;
};

/// Default block size rule: floor(n^0.4999), at least 2 so that every block
/// supports a nondegenerate fit.
inline int default_block_size(std::size_t n) {
  if (n < 1) throw std::invalid_argument("default_block_size: n must be >= 1");
  const double h = std::floor(std::pow(static_cast<double>(n), 0.4999));
  return h < 2.0 ? 2 : static_cast<int>(h);
}

/// Splits a series into contiguous blocks of h observations; the last block
/// keeps the 1..h leftover observations. Block lengths are sums of dts.
inline BlockPartition partition_blocks(const ObservationSeries& series, int h) {
  validate(series);
  if (h < 1) throw std::invalid_argument("partition_blocks: h must be >= 1");
  const std::size_t n = series.size();
  BlockPartition part;
  part.h = h;
  part.n_blocks = (n + static_cast<std::size_t>(h) - 1) / static_cast<std::size_t>(h);
  part.boundaries.reserve(part.n_blocks);
  part.block_lengths.reserve(part.n_blocks);
  for (std::size_t begin = 0; begin < n; begin += static_cast<std::size_t>(h)) {
    const std::size_t end = std::min(n, begin + static_cast<std::size_t>(h));
    double len = 0.0;
    for (std::size_t i = begin; i < end; ++i) len += series.dts[i];
    part.boundaries.emplace_back(begin, end);
    part.block_lengths.push_back(len);
  }
  return part;
}

/// Weighted sum of local estimates, each weighted by its block length:
/// theta_hat = (1/T) * sum_i theta_i * dT_i. With equal block lengths summing
/// to T this reduces to the plain mean of the locals.
inline Eigen::VectorXd lpe_aggregate(const std::vector<LocalEstimate>& locals,
                                     const BlockPartition& partition,
                                     double T) {
  if (locals.size() != partition.n_blocks)
    throw std::invalid_argument("lpe_aggregate: locals/blocks length mismatch");
  if (!(T > 0.0)) throw std::invalid_argument("lpe_aggregate: T must be > 0");
  if (locals.empty()) throw std::invalid_argument("lpe_aggregate: no blocks");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(locals.front().theta.size());
  for (std::size_t i = 0; i < locals.size(); ++i) {
    if (locals[i].theta.size() != acc.size())
      throw std::invalid_argument("lpe_aggregate: inconsistent theta dimension");
    acc += locals[i].theta * partition.block_lengths[i];
  }
  return acc / T;
}

/// Weighted sum of per-block variance estimates:
/// V_hat = T^{-2} * sum_i V_i * dT_i. The result is symmetrized to absorb
/// floating-point drift in the inputs.
inline Eigen::MatrixXd av_aggregate(const std::vector<LocalEstimate>& locals,
                                    const BlockPartition& partition,
                                    double T) {
  if (locals.size() != partition.n_blocks)
    throw std::invalid_argument("av_aggregate: locals/blocks length mismatch");
  if (!(T > 0.0)) throw std::invalid_argument("av_aggregate: T must be > 0");
  if (locals.empty()) throw std::invalid_argument("av_aggregate: no blocks");
  for (const auto& l : locals) {
    if (!l.variance)
      throw std::invalid_argument("av_aggregate: block missing variance");
  }
  const Eigen::Index p = locals.front().variance->rows();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t i = 0; i < locals.size(); ++i) {
    acc += *locals[i].variance * partition.block_lengths[i];
  }
  acc /= T * T;
  return 0.5 * (acc + acc.transpose());
}

/// Chi-square test for constancy of a scalar parameter across blocks.
/// locals must exclude the final (short) block; sd is the common standard
/// deviation of a block estimate under the null.
inline ConstancyTest constancy_chisq(const std::vector<double>& locals,
                                     double global_estimate, double sd) {
  if (locals.size() < 2)
    throw std::invalid_argument("constancy_chisq: need at least 2 local estimates");
  if (!(sd > 0.0)) throw std::invalid_argument("constancy_chisq: sd must be > 0");
  double stat = 0.0;
  for (double v : locals) {
    const double z = (v - global_estimate) / sd;
    stat += z * z;
  }
  ConstancyTest out;
  out.stat = stat;
  out.df = static_cast<int>(locals.size());
  out.pvalue = chisq_survival(stat, out.df);
  return out;
}

}  // namespace lpe
