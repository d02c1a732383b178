#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mint/knn.hpp"
#include "mint/point_set.hpp"

namespace mint {

/// Digamma function for x > 0: upward recurrence to x >= 10 followed by the
/// asymptotic expansion. Absolute error below 1e-10 on [1e-3, 1e6].
double digamma(double x);

/// Volume of the unit Euclidean ball in d dimensions, pi^(d/2) / Gamma(1 + d/2).
double unit_ball_volume(std::size_t d);
double log_unit_ball_volume(std::size_t d);

/// Weights over neighbour orders 1..k for the weighted Kozachenko-Leonenko
/// estimator in dimension d.
class WeightVector {
 public:
  WeightVector(std::size_t k, std::size_t d, std::vector<double> w);

  /// All mass on order k: the classical estimator.
  static WeightVector unweighted(std::size_t k, std::size_t d);

  std::size_t k() const noexcept { return w_.size(); }
  std::size_t dim() const noexcept { return d_; }
  /// w[j] is the weight of neighbour order j + 1.
  double operator[](std::size_t j) const noexcept { return w_[j]; }
  std::span<const double> values() const noexcept { return w_; }

  bool operator==(const WeightVector&) const = default;

 private:
  std::size_t d_;
  std::vector<double> w_;
};

enum class WeightMode { AutoSolve, Unweighted };

/// Admissible neighbour orders {floor(k/d), floor(2k/d), ..., k} with
/// duplicates and order 0 removed, ascending.
std::vector<std::size_t> weight_support(std::size_t k, std::size_t d);

/// Minimum-norm weights on the support satisfying sum w = 1 and
/// sum_j w_j Gamma(j + 2l/d) / Gamma(j) = 0 for l = 1..floor(d/4).
/// For d <= 3 no moment constraint binds and the unweighted vector is
/// returned. Throws InfeasibleSupport when the support has fewer than
/// floor(d/4) + 1 orders and IllConditioned when the constraint matrix has
/// condition number above 1e12.
WeightVector solve_weights(std::size_t k, std::size_t d);

WeightVector make_weights(std::size_t k, std::size_t d, WeightMode mode);

/// Largest absolute violation of each constraint family, for diagnostics.
struct WeightResiduals {
  double sum_error;        // |sum w - 1|
  double moment_error;     // max_l |sum w_j G_l(j)| / max_j |w_j G_l(j)|
  bool support_ok;         // zero off the admissible support
};
WeightResiduals check_weights(const WeightVector& w);

struct EntropyEstimate {
  double value;
  std::size_t k;
  std::size_t n;
  std::size_t d;
  WeightVector weights;
};

/// Weighted Kozachenko-Leonenko entropy estimate in nats:
///   (1/n) sum_i sum_j w_j [d log rho_(j),i + log V_d + log(n-1) - digamma(j)].
EntropyEstimate kl_entropy(const PointSet& points, std::size_t k,
                           const WeightVector& weights,
                           KnnMethod method = KnnMethod::KdTree);

/// Same estimate from precomputed neighbour distances. Only the first
/// weights.k() columns of `rho` are read, so one distance table computed at
/// the largest order serves every smaller k.
double kl_entropy_from_distances(const NeighbourDistances& rho, std::size_t d,
                                 const WeightVector& weights);

}  // namespace mint
