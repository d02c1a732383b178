#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mint/entropy.hpp"
#include "mint/knn.hpp"
#include "mint/point_set.hpp"
#include "mint/sampler.hpp"

namespace mint {

/// Sample whose columns are partitioned into contiguous blocks
/// (X first, then Y, optionally further vectors).
struct BlockedSample {
  PointSet points;
  std::vector<std::size_t> block_widths;

  static BlockedSample from_blocks(std::span<const PointSet> blocks);
  static BlockedSample two_block(const PointSet& x, const PointSet& y);

  std::size_t size() const noexcept { return points.size(); }
  std::size_t block_count() const noexcept { return block_widths.size(); }
  std::size_t block_offset(std::size_t block) const noexcept;
  PointSet block(std::size_t block) const;
};

/// Throws InvalidArgument unless the blocks are non-empty, cover every column
/// and n >= 4.
void validate_sample(const BlockedSample& sample);

struct TestConfig {
  std::optional<std::size_t> k_joint;
  /// Per-block orders; missing entries use the default rule.
  std::vector<std::size_t> k_marginals;
  WeightMode weight_mode = WeightMode::AutoSolve;
  std::size_t resamples = 99;  // B
  double level = 0.05;         // q
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  KnnMethod knn = KnnMethod::KdTree;
};

/// max(3, floor(n^0.35)) clamped to n - 1.
std::size_t default_k(std::size_t n);

std::size_t joint_k(const TestConfig& config, std::size_t n);
std::size_t marginal_k(const TestConfig& config, std::size_t block, std::size_t n);

struct TestOutcome {
  double statistic = 0.0;
  std::vector<double> null_stats;
  double p_value = 1.0;
  double critical_value = 0.0;
  bool reject = false;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::optional<std::size_t> k_hat;
};

/// Builds an outcome from T(0) and T(1..B), where larger values indicate
/// dependence. p = #{b : T(b) >= T(0)} / (B + 1); the critical value is the
/// infimum of r with #{b : T(b) >= r} / (B + 1) <= q; reject iff p <= q.
TestOutcome make_outcome(double observed, std::vector<double> null_stats,
                         double level, std::uint64_t seed);

/// Which form of the statistic is compared across resamples. The reduced
/// form drops entropy terms that are identical for every resample; both give
/// the same decisions.
enum class StatisticForm { Reduced, Full };

/// Sum of block entropies minus the joint entropy, in nats.
double mutual_information(const BlockedSample& sample, const TestConfig& config);

/// Independence test with known Y marginal: the null statistics come from
/// fresh Y pseudo-samples drawn from `y_sampler`.
TestOutcome mint_known(const BlockedSample& sample, const MarginalSampler& y_sampler,
                       const TestConfig& config);

/// Permutation independence test of two blocks.
TestOutcome mint_unknown(const BlockedSample& sample, const TestConfig& config,
                         StatisticForm form = StatisticForm::Reduced);

/// mint_unknown for every k in `k_grid` sharing the same permutations.
/// Element i matches mint_unknown with k_joint = k_grid[i] and the same seed.
std::vector<TestOutcome> mint_unknown_grid(const BlockedSample& sample,
                                           std::span<const std::size_t> k_grid,
                                           const TestConfig& config);

/// Smallest k minimising sum_j (H_k(perm 2j) - H_k(perm 2j-1))^2 over the
/// supplied permutations (an even number of them), using unweighted joint
/// entropies.
std::size_t select_k(const BlockedSample& sample, std::span<const std::size_t> k_grid,
                     std::span<const std::vector<std::size_t>> permutations,
                     KnnMethod knn = KnnMethod::KdTree);

/// Data-driven k: draws 2N permutations, picks k by select_k, then runs the
/// unweighted permutation test at that k.
TestOutcome mint_auto(const BlockedSample& sample, std::span<const std::size_t> k_grid,
                      std::size_t pairs, const TestConfig& config);

/// Multiscale test: the statistic is minus the average unweighted joint
/// entropy over `k_grid`.
TestOutcome mint_av(const BlockedSample& sample, std::span<const std::size_t> k_grid,
                    const TestConfig& config);

/// Mutual independence of p >= 2 blocks; block 1 stays fixed and blocks
/// 2..p are permuted independently in each resample.
TestOutcome mint_multi(const BlockedSample& sample, const TestConfig& config);

}  // namespace mint
