#include "mint/independence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mint/error.hpp"
#include "mint/parallel.hpp"
#include "mint/rng.hpp"

namespace mint {

BlockedSample BlockedSample::from_blocks(std::span<const PointSet> blocks) {
  if (blocks.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one block");
  BlockedSample out;
  out.points = blocks[0];
  out.block_widths.push_back(blocks[0].dim());
  for (std::size_t b = 1; b < blocks.size(); ++b) {
    out.points = PointSet::hstack(out.points, blocks[b]);
    out.block_widths.push_back(blocks[b].dim());
  }
  return out;
}

BlockedSample BlockedSample::two_block(const PointSet& x, const PointSet& y) {
  const PointSet parts[] = {x, y};
  return from_blocks(parts);
}

std::size_t BlockedSample::block_offset(std::size_t block) const noexcept {
  return std::accumulate(block_widths.begin(),
                         block_widths.begin() + static_cast<std::ptrdiff_t>(block), std::size_t{0});
}

PointSet BlockedSample::block(std::size_t block) const {
  return points.columns(block_offset(block), block_widths.at(block));
}

void validate_sample(const BlockedSample& sample) {
  validate_point_set(sample.points);
  if (sample.block_widths.empty()) throw Error(ErrorKind::InvalidArgument, "sample has no blocks");
  std::size_t total = 0;
  for (std::size_t w : sample.block_widths) {
    if (w == 0) throw Error(ErrorKind::InvalidArgument, "empty column block");
    total += w;
  }
  if (total != sample.points.dim()) {
    throw Error(ErrorKind::InvalidArgument, "blocks do not cover the sample's columns");
  }
  if (sample.size() < 4) throw Error(ErrorKind::InvalidArgument, "need at least 4 observations");
}

std::size_t default_k(std::size_t n) {
  const auto rule = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.35)));
  const std::size_t k = std::max<std::size_t>(3, rule);
  return std::max<std::size_t>(1, std::min(k, n > 1 ? n - 1 : 1));
}

std::size_t joint_k(const TestConfig& config, std::size_t n) {
  return config.k_joint.value_or(default_k(n));
}

std::size_t marginal_k(const TestConfig& config, std::size_t block, std::size_t n) {
  return block < config.k_marginals.size() ? config.k_marginals[block] : default_k(n);
}

TestOutcome make_outcome(double observed, std::vector<double> null_stats, double level,
                         std::uint64_t seed) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::InvalidArgument, "q must lie in (0, 1)");
  const std::size_t total = null_stats.size() + 1;
  const double denom = static_cast<double>(total);

  std::size_t at_least = 1;  // b = 0
  for (double t : null_stats) at_least += (t >= observed) ? 1 : 0;

  // Largest count c with c / (B + 1) <= q; the critical value is the
  // (c + 1)-th largest of T(0..B).
  std::size_t allowed = 0;
  while (allowed + 1 < total && static_cast<double>(allowed + 1) / denom <= level) ++allowed;
  std::vector<double> all(null_stats);
  all.push_back(observed);
  std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(allowed), all.end(),
                   std::greater<>());

  TestOutcome out;
  out.statistic = observed;
  out.null_stats = std::move(null_stats);
  out.p_value = static_cast<double>(at_least) / denom;
  out.critical_value = all[allowed];
  out.reject = out.p_value <= level;
  out.seed = seed;
  return out;
}

namespace {

void check_config(const TestConfig& config) {
  if (config.resamples == 0) throw Error(ErrorKind::InvalidArgument, "B must be at least 1");
  if (!(config.level > 0.0 && config.level < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "q must lie in (0, 1)");
  }
}

void require_blocks(const BlockedSample& sample, std::size_t exact) {
  if (sample.block_count() != exact) {
    throw Error(ErrorKind::InvalidArgument,
                "expected " + std::to_string(exact) + " blocks, got " +
                    std::to_string(sample.block_count()));
  }
}

double entropy_of(const PointSet& points, std::size_t k, const WeightVector& w, KnnMethod knn) {
  return kl_entropy_from_distances(knn_distances(points, k, knn), points.dim(), w);
}

// Rows of each block b >= 1 reordered by perms[b - 1]: row i takes row
// perms[b - 1][i] of that block.
PointSet permute_blocks(const BlockedSample& sample,
                        std::span<const std::vector<std::size_t>> perms) {
  PointSet out = sample.points;
  std::size_t offset = sample.block_widths[0];
  for (std::size_t b = 1; b < sample.block_count(); ++b) {
    const auto& perm = perms[b - 1];
    const std::size_t width = sample.block_widths[b];
    for (std::size_t i = 0; i < sample.size(); ++i) {
      for (std::size_t t = 0; t < width; ++t) {
        out(i, offset + t) = sample.points(perm[i], offset + t);
      }
    }
    offset += width;
  }
  return out;
}

PointSet permute_second(const BlockedSample& sample, const std::vector<std::size_t>& perm) {
  return permute_blocks(sample, std::span<const std::vector<std::size_t>>(&perm, 1));
}

std::vector<std::size_t> normalised_grid(std::span<const std::size_t> k_grid) {
  std::vector<std::size_t> grid(k_grid.begin(), k_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "k grid is empty");
  if (grid.front() == 0) throw Error(ErrorKind::InvalidArgument, "k grid entries must be positive");
  return grid;
}

std::vector<double> unweighted_entropies(const PointSet& points, std::span<const std::size_t> grid,
                                         KnnMethod knn) {
  const auto rho = knn_distances(points, grid.back(), knn);
  std::vector<double> h;
  h.reserve(grid.size());
  for (std::size_t k : grid) {
    h.push_back(kl_entropy_from_distances(rho, points.dim(), WeightVector::unweighted(k, points.dim())));
  }
  return h;
}

}  // namespace

double mutual_information(const BlockedSample& sample, const TestConfig& config) {
  validate_sample(sample);
  const std::size_t n = sample.size();
  double total = 0.0;
  for (std::size_t b = 0; b < sample.block_count(); ++b) {
    const std::size_t k = marginal_k(config, b, n);
    const std::size_t d = sample.block_widths[b];
    total += entropy_of(sample.block(b), k, make_weights(k, d, config.weight_mode), config.knn);
  }
  const std::size_t k = joint_k(config, n);
  const std::size_t d = sample.points.dim();
  return total - entropy_of(sample.points, k, make_weights(k, d, config.weight_mode), config.knn);
}

TestOutcome mint_known(const BlockedSample& sample, const MarginalSampler& y_sampler,
                       const TestConfig& config) {
  validate_sample(sample);
  require_blocks(sample, 2);
  check_config(config);
  if (y_sampler.dim() != sample.block_widths[1]) {
    throw Error(ErrorKind::SamplerDimensionMismatch,
                "sampler dimension " + std::to_string(y_sampler.dim()) +
                    " does not match Y block width " + std::to_string(sample.block_widths[1]));
  }
  const std::size_t n = sample.size();
  const std::size_t dy = sample.block_widths[1];
  const std::size_t d = sample.points.dim();
  const std::size_t ky = marginal_k(config, 1, n);
  const std::size_t kz = joint_k(config, n);
  const WeightVector wy = make_weights(ky, dy, config.weight_mode);
  const WeightVector wz = make_weights(kz, d, config.weight_mode);
  const PointSet x = sample.block(0);

  auto reduced = [&](const PointSet& y) {
    return entropy_of(y, ky, wy, config.knn) -
           entropy_of(PointSet::hstack(x, y), kz, wz, config.knn);
  };

  const double observed = reduced(sample.block(1));
  std::vector<double> nulls(config.resamples);
  parallel_for(config.resamples, config.threads, [&](std::size_t b) {
    Rng rng = Rng::stream(config.seed, StreamDomain::Resample, b + 1);
    nulls[b] = reduced(y_sampler.draw(rng, n));
  });
  auto out = make_outcome(observed, std::move(nulls), config.level, config.seed);
  out.k = kz;
  return out;
}

TestOutcome mint_unknown(const BlockedSample& sample, const TestConfig& config, StatisticForm form) {
  validate_sample(sample);
  require_blocks(sample, 2);
  check_config(config);
  const std::size_t n = sample.size();
  const std::size_t d = sample.points.dim();
  const std::size_t kz = joint_k(config, n);
  const WeightVector wz = make_weights(kz, d, config.weight_mode);

  // Full form: H_X + H_Y(permuted Y) - H_Z(permuted joint), every term computed.
  double hx = 0.0;
  std::size_t ky = 0;
  std::optional<WeightVector> wy;
  if (form == StatisticForm::Full) {
    const std::size_t kx = marginal_k(config, 0, n);
    ky = marginal_k(config, 1, n);
    hx = entropy_of(sample.block(0), kx, make_weights(kx, sample.block_widths[0], config.weight_mode),
                    config.knn);
    wy = make_weights(ky, sample.block_widths[1], config.weight_mode);
  }
  auto statistic = [&](const PointSet& joint) {
    const double hz = entropy_of(joint, kz, wz, config.knn);
    if (form == StatisticForm::Reduced) return -hz;
    const double hy = entropy_of(joint.columns(sample.block_widths[0], sample.block_widths[1]), ky, *wy,
                                 config.knn);
    return hx + hy - hz;
  };

  const double observed = statistic(sample.points);
  std::vector<double> nulls(config.resamples);
  parallel_for(config.resamples, config.threads, [&](std::size_t b) {
    Rng rng = Rng::stream(config.seed, StreamDomain::Resample, b + 1);
    nulls[b] = statistic(permute_second(sample, random_permutation(n, rng)));
  });
  auto out = make_outcome(observed, std::move(nulls), config.level, config.seed);
  out.k = kz;
  return out;
}

std::vector<TestOutcome> mint_unknown_grid(const BlockedSample& sample,
                                           std::span<const std::size_t> k_grid,
                                           const TestConfig& config) {
  validate_sample(sample);
  require_blocks(sample, 2);
  check_config(config);
  const std::vector<std::size_t> grid(k_grid.begin(), k_grid.end());
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "k grid is empty");
  const std::size_t n = sample.size();
  const std::size_t d = sample.points.dim();
  const std::size_t kmax = *std::max_element(grid.begin(), grid.end());
  std::vector<WeightVector> weights;
  for (std::size_t k : grid) weights.push_back(make_weights(k, d, config.weight_mode));

  auto statistics = [&](const PointSet& joint) {
    const auto rho = knn_distances(joint, kmax, config.knn);
    std::vector<double> t(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) t[g] = -kl_entropy_from_distances(rho, d, weights[g]);
    return t;
  };

  const auto observed = statistics(sample.points);
  std::vector<std::vector<double>> nulls(config.resamples);
  parallel_for(config.resamples, config.threads, [&](std::size_t b) {
    Rng rng = Rng::stream(config.seed, StreamDomain::Resample, b + 1);
    nulls[b] = statistics(permute_second(sample, random_permutation(n, rng)));
  });

  std::vector<TestOutcome> outcomes;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> column(config.resamples);
    for (std::size_t b = 0; b < config.resamples; ++b) column[b] = nulls[b][g];
    auto out = make_outcome(observed[g], std::move(column), config.level, config.seed);
    out.k = grid[g];
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

std::size_t select_k(const BlockedSample& sample, std::span<const std::size_t> k_grid,
                     std::span<const std::vector<std::size_t>> permutations, KnnMethod knn) {
  validate_sample(sample);
  require_blocks(sample, 2);
  const auto grid = normalised_grid(k_grid);
  if (permutations.empty() || permutations.size() % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "k selection needs a positive even number of permutations");
  }
  std::vector<double> criterion(grid.size(), 0.0);
  std::vector<double> previous;
  for (std::size_t j = 0; j < permutations.size(); ++j) {
    auto h = unweighted_entropies(permute_second(sample, permutations[j]), grid, knn);
    if (j % 2 == 1) {
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double diff = h[g] - previous[g];
        criterion[g] += diff * diff;
      }
    }
    previous = std::move(h);
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (criterion[g] < criterion[best]) best = g;
  }
  return grid[best];
}

TestOutcome mint_auto(const BlockedSample& sample, std::span<const std::size_t> k_grid,
                      std::size_t pairs, const TestConfig& config) {
  if (pairs == 0) throw Error(ErrorKind::InvalidArgument, "N must be at least 1");
  validate_sample(sample);
  const std::size_t n = sample.size();
  std::vector<std::vector<std::size_t>> perms(2 * pairs);
  for (std::size_t j = 0; j < perms.size(); ++j) {
    Rng rng = Rng::stream(config.seed, StreamDomain::KSelection, j + 1);
    perms[j] = random_permutation(n, rng);
  }
  const std::size_t k_hat = select_k(sample, k_grid, perms, config.knn);
  TestConfig chosen = config;
  chosen.k_joint = k_hat;
  chosen.weight_mode = WeightMode::Unweighted;
  auto out = mint_unknown(sample, chosen);
  out.k_hat = k_hat;
  return out;
}

TestOutcome mint_av(const BlockedSample& sample, std::span<const std::size_t> k_grid,
                    const TestConfig& config) {
  validate_sample(sample);
  require_blocks(sample, 2);
  check_config(config);
  const auto grid = normalised_grid(k_grid);
  const std::size_t n = sample.size();
  auto statistic = [&](const PointSet& joint) {
    const auto h = unweighted_entropies(joint, grid, config.knn);
    double sum = 0.0;
    for (double v : h) sum += v;
    return -(sum / static_cast<double>(grid.size()));
  };
  const double observed = statistic(sample.points);
  std::vector<double> nulls(config.resamples);
  parallel_for(config.resamples, config.threads, [&](std::size_t b) {
    Rng rng = Rng::stream(config.seed, StreamDomain::Resample, b + 1);
    nulls[b] = statistic(permute_second(sample, random_permutation(n, rng)));
  });
  auto out = make_outcome(observed, std::move(nulls), config.level, config.seed);
  out.k = grid.back();
  return out;
}

TestOutcome mint_multi(const BlockedSample& sample, const TestConfig& config) {
  validate_sample(sample);
  check_config(config);
  if (sample.block_count() < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 blocks");
  const std::size_t n = sample.size();
  const std::size_t d = sample.points.dim();
  const std::size_t kz = joint_k(config, n);
  const WeightVector wz = make_weights(kz, d, config.weight_mode);
  const double observed = -entropy_of(sample.points, kz, wz, config.knn);
  std::vector<double> nulls(config.resamples);
  parallel_for(config.resamples, config.threads, [&](std::size_t b) {
    // Blocks 2..p draw their permutations in order from one stream, so the
    // two-block case reproduces mint_unknown exactly.
    Rng rng = Rng::stream(config.seed, StreamDomain::Resample, b + 1);
    std::vector<std::vector<std::size_t>> perms;
    for (std::size_t j = 1; j < sample.block_count(); ++j) perms.push_back(random_permutation(n, rng));
    nulls[b] = -entropy_of(permute_blocks(sample, perms), kz, wz, config.knn);
  });
  auto out = make_outcome(observed, std::move(nulls), config.level, config.seed);
  out.k = kz;
  return out;
}

}  // namespace mint
