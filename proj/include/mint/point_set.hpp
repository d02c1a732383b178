#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mint {

/// Dense row-major n x d matrix of sample coordinates.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t n, std::size_t d) : n_(n), d_(d), data_(n * d, 0.0) {}
  PointSet(std::size_t n, std::size_t d, std::vector<double> data);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * d_, d_};
  }
  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * d_, d_};
  }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * d_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * d_ + j];
  }

  const std::vector<double>& data() const noexcept { return data_; }

  /// Columns [first, first + count) as a new point set.
  PointSet columns(std::size_t first, std::size_t count) const;
  /// Horizontal concatenation; both operands must have the same row count.
  static PointSet hstack(const PointSet& left, const PointSet& right);

  bool operator==(const PointSet&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> data_;
};

/// Throws InvalidArgument unless n >= 2, d >= 1 and every coordinate is finite.
void validate_point_set(const PointSet& points);

}  // namespace mint
