#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "mint/entropy.hpp"
#include "mint/error.hpp"

namespace mint {

namespace {

// Gamma(j + 2l/d) / Gamma(j)
double gamma_moment(std::size_t j, std::size_t l, std::size_t d) {
  if (l == 0) return 1.0;
  const double shift = 2.0 * static_cast<double>(l) / static_cast<double>(d);
  return boost::math::tgamma_ratio(static_cast<double>(j) + shift, static_cast<double>(j));
}

}  // namespace

WeightVector::WeightVector(std::size_t k, std::size_t d, std::vector<double> w)
    : d_(d), w_(std::move(w)) {
  if (k == 0 || d == 0) throw Error(ErrorKind::InvalidArgument, "weights need k >= 1 and d >= 1");
  if (w_.size() != k) throw Error(ErrorKind::InvalidArgument, "weight vector length must equal k");
}

WeightVector WeightVector::unweighted(std::size_t k, std::size_t d) {
  std::vector<double> w(k, 0.0);
  if (k > 0) w.back() = 1.0;
  return WeightVector(k, d, std::move(w));
}

std::vector<std::size_t> weight_support(std::size_t k, std::size_t d) {
  std::vector<std::size_t> support;
  for (std::size_t m = 1; m <= d; ++m) {
    const std::size_t j = (m * k) / d;
    if (j == 0) continue;
    if (support.empty() || support.back() != j) support.push_back(j);
  }
  return support;
}

WeightVector solve_weights(std::size_t k, std::size_t d) {
  if (k == 0 || d == 0) throw Error(ErrorKind::InvalidArgument, "weights need k >= 1 and d >= 1");
  const std::size_t moments = d / 4;
  if (moments == 0) return WeightVector::unweighted(k, d);

  const auto support = weight_support(k, d);
  const std::size_t rows = moments + 1;
  if (support.size() < rows) {
    throw Error(ErrorKind::InfeasibleSupport,
                "weight support for k=" + std::to_string(k) + ", d=" + std::to_string(d) +
                    " has " + std::to_string(support.size()) + " orders, need " +
                    std::to_string(rows));
  }

  Eigen::MatrixXd a(rows, support.size());
  for (std::size_t l = 0; l < rows; ++l) {
    for (std::size_t c = 0; c < support.size(); ++c) {
      a(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(c)) = gamma_moment(support[c], l, d);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin > 1e12) {
    throw Error(ErrorKind::IllConditioned,
                "weight constraint matrix is ill-conditioned for k=" + std::to_string(k) +
                    ", d=" + std::to_string(d));
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  rhs(0) = 1.0;
  const Eigen::VectorXd sol = a.completeOrthogonalDecomposition().solve(rhs);

  std::vector<double> w(k, 0.0);
  for (std::size_t c = 0; c < support.size(); ++c) {
    w[support[c] - 1] = sol(static_cast<Eigen::Index>(c));
  }
  return WeightVector(k, d, std::move(w));
}

WeightVector make_weights(std::size_t k, std::size_t d, WeightMode mode) {
  return mode == WeightMode::AutoSolve ? solve_weights(k, d) : WeightVector::unweighted(k, d);
}

WeightResiduals check_weights(const WeightVector& w) {
  const std::size_t k = w.k();
  const std::size_t d = w.dim();
  WeightResiduals r{0.0, 0.0, true};
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) sum += w[j];
  r.sum_error = std::abs(sum - 1.0);

  for (std::size_t l = 1; l <= d / 4; ++l) {
    double total = 0.0;
    double largest = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      const double term = w[j - 1] * gamma_moment(j, l, d);
      total += term;
      largest = std::max(largest, std::abs(term));
    }
    if (largest > 0.0) r.moment_error = std::max(r.moment_error, std::abs(total) / largest);
  }

  const auto support = weight_support(k, d);
  for (std::size_t j = 1; j <= k; ++j) {
    if (w[j - 1] != 0.0 && !std::binary_search(support.begin(), support.end(), j)) {
      r.support_ok = false;
    }
  }
  return r;
}

}  // namespace mint
