#pragma once

// Reference computations for the test suites. Nothing here calls into the
// library's search or estimator code paths.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "mint/point_set.hpp"

namespace oracle {

/// Sorted distances from every point to all others, sum-of-squares then sqrt.
inline std::vector<std::vector<double>> all_neighbour_distances(const mint::PointSet& p) {
  const std::size_t n = p.size();
  std::vector<std::vector<double>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> sq;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == i) continue;
      double s = 0.0;
      for (std::size_t t = 0; t < p.dim(); ++t) {
        const double diff = p(i, t) - p(m, t);
        s += diff * diff;
      }
      sq.push_back(s);
    }
    std::sort(sq.begin(), sq.end());
    for (double& v : sq) v = std::sqrt(v);
    out[i] = std::move(sq);
  }
  return out;
}

/// Classical Kozachenko-Leonenko estimate using the k-th neighbour only.
inline double unweighted_kl(const mint::PointSet& p, std::size_t k) {
  const auto rho = all_neighbour_distances(p);
  const double n = static_cast<double>(p.size());
  const double d = static_cast<double>(p.dim());
  const double vd = std::pow(std::numbers::pi, d / 2.0) / boost::math::tgamma(1.0 + d / 2.0);
  double total = 0.0;
  for (const auto& row : rho) {
    total += std::log(std::pow(row[k - 1], d) * vd * (n - 1.0) /
                      std::exp(boost::math::digamma(static_cast<double>(k))));
  }
  return total / n;
}

/// digamma(m + 1/2) = -gamma - 2 log 2 + sum_{j=1}^m 2 / (2j - 1), in long double.
inline long double digamma_half_integer(unsigned m) {
  long double s = -0.577215664901532860606512090082402431L - 2.0L * std::log(2.0L);
  for (unsigned j = 1; j <= m; ++j) s += 2.0L / (2.0L * j - 1.0L);
  return s;
}

}  // namespace oracle
