#include "mint/point_set.hpp"

#include <cmath>
#include <string>

#include "mint/error.hpp"

namespace mint {

PointSet::PointSet(std::size_t n, std::size_t d, std::vector<double> data)
    : n_(n), d_(d), data_(std::move(data)) {
  if (data_.size() != n * d) {
    throw Error(ErrorKind::InvalidArgument, "point data size does not match n x d");
  }
}

PointSet PointSet::columns(std::size_t first, std::size_t count) const {
  if (first + count > d_) {
    throw Error(ErrorKind::InvalidArgument, "column range out of bounds");
  }
  PointSet out(n_, count);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  }
  return out;
}

PointSet PointSet::hstack(const PointSet& left, const PointSet& right) {
  if (left.size() != right.size()) {
    throw Error(ErrorKind::InvalidArgument, "hstack: row counts differ");
  }
  PointSet out(left.size(), left.dim() + right.dim());
  for (std::size_t i = 0; i < left.size(); ++i) {
    auto dst = out.row(i);
    auto a = left.row(i);
    auto b = right.row(i);
    std::copy(a.begin(), a.end(), dst.begin());
    std::copy(b.begin(), b.end(), dst.begin() + static_cast<std::ptrdiff_t>(a.size()));
  }
  return out;
}

void validate_point_set(const PointSet& points) {
  if (points.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "point set needs at least 2 points");
  }
  if (points.dim() < 1) {
    throw Error(ErrorKind::InvalidArgument, "point set needs at least 1 dimension");
  }
  const auto& data = points.data();
  for (std::size_t idx = 0; idx < data.size(); ++idx) {
    if (!std::isfinite(data[idx])) {
      throw Error(ErrorKind::InvalidArgument,
                  "non-finite coordinate at row " + std::to_string(idx / points.dim()) +
                      ", column " + std::to_string(idx % points.dim()));
    }
  }
}

}  // namespace mint
