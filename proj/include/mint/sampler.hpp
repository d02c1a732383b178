#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "mint/point_set.hpp"
#include "mint/rng.hpp"

namespace mint {

/// Source of i.i.d. draws from a known marginal distribution. Each draw
/// returns an n x dim() block, one independent observation per row.
class MarginalSampler {
 public:
  using DrawFn = std::function<PointSet(Rng&, std::size_t)>;

  MarginalSampler(std::size_t dim, DrawFn draw, std::string description);

  /// Independent N(mean, variance) coordinates.
  static MarginalSampler normal(double mean, double variance, std::size_t dim = 1);
  /// Independent U(lo, hi) coordinates.
  static MarginalSampler uniform(double lo, double hi, std::size_t dim = 1);
  /// Student t with nu > 2 degrees of freedom, rescaled to unit variance.
  static MarginalSampler student_t(double nu, std::size_t dim = 1);
  /// Logistic rescaled to unit variance.
  static MarginalSampler logistic(std::size_t dim = 1);
  /// Rows of a stored pool of draws from the marginal. Each request takes n
  /// distinct rows chosen uniformly without replacement, so the pool must
  /// hold at least n rows and should be much larger for near-i.i.d. output.
  static MarginalSampler empirical(PointSet pool);

  /// Parses "normal(mu,var)", "uniform(a,b)", "t(nu)", "logistic" or
  /// "standard-normal"; the family applies independently to each of `dim`
  /// coordinates.
  static MarginalSampler parse(std::string_view spec, std::size_t dim = 1);

  std::size_t dim() const noexcept { return dim_; }
  const std::string& description() const noexcept { return description_; }
  PointSet draw(Rng& rng, std::size_t n) const;

 private:
  std::size_t dim_;
  DrawFn draw_;
  std::string description_;
};

}  // namespace mint
