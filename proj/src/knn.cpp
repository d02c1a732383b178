#include "mint/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mint/error.hpp"
#include "mint/rng.hpp"

namespace mint {

namespace {

inline double squared_distance(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t t = 0; t < d; ++t) {
    const double diff = a[t] - b[t];
    s += diff * diff;
  }
  return s;
}

// Keeps best[0..filled) sorted ascending with at most best.size() entries.
inline void offer(std::span<double> best, std::size_t& filled, double candidate) {
  const std::size_t k = best.size();
  if (filled == k) {
    if (!(candidate < best[k - 1])) return;
    --filled;
  }
  std::size_t pos = filled;
  while (pos > 0 && best[pos - 1] > candidate) {
    best[pos] = best[pos - 1];
    --pos;
  }
  best[pos] = candidate;
  ++filled;
}

void check_k(std::size_t n, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  if (k > n - 1) {
    throw Error(ErrorKind::KTooLarge, "k must be \xE2\x89\xA4 n\xE2\x88\x92" "1 (k=" +
                                          std::to_string(k) + ", n=" + std::to_string(n) + ")");
  }
}

}  // namespace

std::vector<std::size_t> find_duplicate_rows(const PointSet& points) {
  const std::size_t n = points.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    auto ra = points.row(a);
    auto rb = points.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(idx.begin(), idx.end(), less);
  std::vector<std::size_t> dup;
  for (std::size_t i = 0; i + 1 < n;) {
    std::size_t j = i + 1;
    while (j < n && !less(idx[i], idx[j])) ++j;
    if (j - i > 1) dup.insert(dup.end(), idx.begin() + i, idx.begin() + j);
    i = j;
  }
  std::sort(dup.begin(), dup.end());
  return dup;
}

KdTree::KdTree(const PointSet& points, std::size_t leaf_size)
    : n_(points.size()), d_(points.dim()), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  validate_point_set(points);
  if (auto dup = find_duplicate_rows(points); !dup.empty()) {
    throw DuplicatePointsError(std::move(dup));
  }
  order_.resize(n_);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  // Build against the caller's coordinates, then lay them out in slot order.
  coords_ = points.data();
  nodes_.reserve(2 * (n_ / leaf_size_ + 1));
  build(0, n_);
  std::vector<double> laid(n_ * d_);
  slot_.resize(n_);
  for (std::size_t s = 0; s < n_; ++s) {
    std::copy_n(coords_.data() + order_[s] * d_, d_, laid.data() + s * d_);
    slot_[order_[s]] = s;
  }
  coords_ = std::move(laid);
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
  const std::size_t id = nodes_.size();
  nodes_.push_back({begin, end, 0, 0});
  boxes_.resize(boxes_.size() + 2 * d_);
  double* lo = boxes_.data() + id * 2 * d_;
  double* hi = lo + d_;
  std::fill(lo, lo + d_, std::numeric_limits<double>::infinity());
  std::fill(hi, hi + d_, -std::numeric_limits<double>::infinity());
  for (std::size_t s = begin; s < end; ++s) {
    const double* p = coords_.data() + order_[s] * d_;
    for (std::size_t t = 0; t < d_; ++t) {
      lo[t] = std::min(lo[t], p[t]);
      hi[t] = std::max(hi[t], p[t]);
    }
  }
  if (end - begin <= leaf_size_) return id;

  std::size_t axis = 0;
  double widest = -1.0;
  for (std::size_t t = 0; t < d_; ++t) {
    if (hi[t] - lo[t] > widest) {
      widest = hi[t] - lo[t];
      axis = t;
    }
  }
  const std::size_t mid = begin + (end - begin) / 2;
  auto first = order_.begin() + static_cast<std::ptrdiff_t>(begin);
  std::nth_element(first, order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     const double ca = coords_[a * d_ + axis];
                     const double cb = coords_[b * d_ + axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::size_t KdTree::leaf_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& nd) { return nd.left == 0; }));
}

double KdTree::box_distance(std::size_t node, const double* q) const {
  const double* lo = boxes_.data() + node * 2 * d_;
  const double* hi = lo + d_;
  double s = 0.0;
  for (std::size_t t = 0; t < d_; ++t) {
    double gap = 0.0;
    if (q[t] < lo[t]) {
      gap = lo[t] - q[t];
    } else if (q[t] > hi[t]) {
      gap = q[t] - hi[t];
    }
    s += gap * gap;
  }
  return s;
}

// The box bound never exceeds the floating-point distance to any point in
// the box (rounding is monotone), so pruning on >= keeps results exact.
void KdTree::search(std::size_t node, const double* q, std::size_t skip,
                    std::span<double> best, std::size_t& filled) const {
  const Node& nd = nodes_[node];
  if (nd.left == 0) {
    for (std::size_t s = nd.begin; s < nd.end; ++s) {
      if (s == skip) continue;
      offer(best, filled, squared_distance(coords_.data() + s * d_, q, d_));
    }
    return;
  }
  const double dl = box_distance(nd.left, q);
  const double dr = box_distance(nd.right, q);
  const bool left_first = dl <= dr;
  const std::size_t near = left_first ? nd.left : nd.right;
  const std::size_t far = left_first ? nd.right : nd.left;
  const double dnear = left_first ? dl : dr;
  const double dfar = left_first ? dr : dl;
  if (filled < best.size() || dnear < best[best.size() - 1]) {
    search(near, q, skip, best, filled);
  }
  if (filled < best.size() || dfar < best[best.size() - 1]) {
    search(far, q, skip, best, filled);
  }
}

void KdTree::query_self(std::size_t self, std::span<double> out_sq) const {
  if (out_sq.empty()) return;
  check_k(n_, out_sq.size());
  const std::size_t s = slot_[self];
  std::size_t filled = 0;
  search(0, coords_.data() + s * d_, s, out_sq, filled);
}

void KdTree::query(std::span<const double> location, std::span<double> out_sq) const {
  if (out_sq.empty()) return;
  if (location.size() != d_) {
    throw Error(ErrorKind::InvalidArgument, "query dimension mismatch");
  }
  if (out_sq.size() > n_) {
    throw Error(ErrorKind::KTooLarge, "k exceeds the number of indexed points");
  }
  std::size_t filled = 0;
  search(0, location.data(), n_, out_sq, filled);
}

NeighbourDistances knn_distances(const PointSet& points, std::size_t k, KnnMethod method) {
  if (method == KnnMethod::BruteForce) return knn_distances_brute_force(points, k);
  validate_point_set(points);
  check_k(points.size(), k);
  const KdTree tree(points);
  NeighbourDistances out(points.size(), k);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto row = out.row(i);
    tree.query_self(i, row);
    for (double& v : row) v = std::sqrt(v);
  }
  return out;
}

NeighbourDistances knn_distances_brute_force(const PointSet& points, std::size_t k) {
  validate_point_set(points);
  check_k(points.size(), k);
  if (auto dup = find_duplicate_rows(points); !dup.empty()) {
    throw DuplicatePointsError(std::move(dup));
  }
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  NeighbourDistances out(n, k);
  std::vector<double> all;
  all.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    all.clear();
    for (std::size_t m = 0; m < n; ++m) {
      if (m == i) continue;
      all.push_back(squared_distance(points.row(m).data(), points.row(i).data(), d));
    }
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    auto row = out.row(i);
    for (std::size_t j = 0; j < k; ++j) row[j] = std::sqrt(all[j]);
  }
  return out;
}

PointSet jitter(const PointSet& points, std::uint64_t seed) {
  validate_point_set(points);
  PointSet out = points;
  Rng rng = Rng::stream(seed, StreamDomain::Jitter, 0);
  std::vector<double> scale(points.dim());
  for (std::size_t t = 0; t < points.dim(); ++t) {
    double lo = points(0, t);
    double hi = lo;
    for (std::size_t i = 1; i < points.size(); ++i) {
      lo = std::min(lo, points(i, t));
      hi = std::max(hi, points(i, t));
    }
    const double range = hi - lo;
    scale[t] = 1e-10 * (range > 0.0 ? range : std::max(1.0, std::abs(lo)));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t t = 0; t < out.dim(); ++t) {
      out(i, t) += scale[t] * rng.uniform(-1.0, 1.0);
    }
  }
  return out;
}

}  // namespace mint
