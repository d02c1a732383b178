#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mint/point_set.hpp"

namespace mint {

/// rho(i, j) is the Euclidean distance from point i to its (j+1)-th nearest
/// neighbour among the other n - 1 points. Rows are non-decreasing.
class NeighbourDistances {
 public:
  NeighbourDistances(std::size_t n, std::size_t k) : n_(n), k_(k), rho_(n * k) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return rho_[i * k_ + j];
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {rho_.data() + i * k_, k_};
  }
  std::span<double> row(std::size_t i) noexcept {
    return {rho_.data() + i * k_, k_};
  }

  bool operator==(const NeighbourDistances&) const = default;

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<double> rho_;
};

/// Exact Euclidean kd-tree over a fixed point set. Median splits on the
/// widest bounding-box axis. Immutable once built, so concurrent queries are
/// safe as long as each thread uses its own output buffer.
class KdTree {
 public:
  static constexpr std::size_t kDefaultLeafSize = 16;

  /// Throws DuplicatePointsError if two rows coincide.
  explicit KdTree(const PointSet& points, std::size_t leaf_size = kDefaultLeafSize);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  std::size_t leaf_count() const noexcept;

  /// Squared distances from the indexed point `self` to its k nearest other
  /// points, ascending. `out_sq` must have room for k values, k <= n - 1.
  void query_self(std::size_t self, std::span<double> out_sq) const;

  /// Squared distances from an arbitrary location to its k nearest indexed
  /// points, ascending.
  void query(std::span<const double> location, std::span<double> out_sq) const;

 private:
  struct Node {
    std::size_t begin;
    std::size_t end;
    std::size_t left;   // 0 for leaves
    std::size_t right;
  };

  std::size_t build(std::size_t begin, std::size_t end);
  void search(std::size_t node, const double* q, std::size_t skip,
              std::span<double> best, std::size_t& filled) const;
  double box_distance(std::size_t node, const double* q) const;

  std::size_t n_;
  std::size_t d_;
  std::size_t leaf_size_;
  std::vector<double> coords_;       // tree order, row-major
  std::vector<std::size_t> order_;   // tree slot -> original row
  std::vector<std::size_t> slot_;    // original row -> tree slot
  std::vector<Node> nodes_;
  std::vector<double> boxes_;        // per node: d lows then d highs
};

enum class KnnMethod { KdTree, BruteForce };

/// Exact k-nearest-neighbour distances for every point (excluding itself).
/// Throws KTooLarge when k > n - 1 and DuplicatePointsError on repeated rows.
NeighbourDistances knn_distances(const PointSet& points, std::size_t k,
                                 KnnMethod method = KnnMethod::KdTree);

/// O(n^2) reference used to check the index.
NeighbourDistances knn_distances_brute_force(const PointSet& points, std::size_t k);

/// Every row index that shares its coordinates with another row, ascending.
std::vector<std::size_t> find_duplicate_rows(const PointSet& points);

/// Adds seeded uniform noise of magnitude 1e-10 times each column's range.
/// Opt-in repair for real data with tied observations.
PointSet jitter(const PointSet& points, std::uint64_t seed);

}  // namespace mint
