#include "mint/entropy.hpp"

#include <cmath>
#include <vector>

#include "mint/error.hpp"

namespace mint {

double kl_entropy_from_distances(const NeighbourDistances& rho, std::size_t d,
                                 const WeightVector& weights) {
  const std::size_t n = rho.size();
  const std::size_t k = weights.k();
  if (k > rho.k()) throw Error(ErrorKind::InvalidArgument, "distance table has fewer than k columns");
  if (weights.dim() != d) throw Error(ErrorKind::InvalidArgument, "weights built for a different dimension");

  // Per-order constant w_j [log V_d + log(n-1) - digamma(j)] for the nonzero weights.
  const double base = log_unit_ball_volume(d) + std::log(static_cast<double>(n - 1));
  std::vector<std::size_t> orders;
  std::vector<double> scale;
  double offset = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (weights[j] == 0.0) continue;
    orders.push_back(j);
    scale.push_back(weights[j] * static_cast<double>(d));
    offset += weights[j] * (base - digamma(static_cast<double>(j + 1)));
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = rho.row(i);
    double point = offset;
    for (std::size_t c = 0; c < orders.size(); ++c) point += scale[c] * std::log(row[orders[c]]);
    total += point;
  }
  return total / static_cast<double>(n);
}

EntropyEstimate kl_entropy(const PointSet& points, std::size_t k, const WeightVector& weights,
                           KnnMethod method) {
  if (weights.k() != k) throw Error(ErrorKind::InvalidArgument, "weights.k() must equal k");
  if (weights.dim() != points.dim()) {
    throw Error(ErrorKind::InvalidArgument, "weights built for a different dimension");
  }
  const auto rho = knn_distances(points, k, method);
  const double value = kl_entropy_from_distances(rho, points.dim(), weights);
  return {value, k, points.size(), points.dim(), weights};
}

}  // namespace mint
