#include "mint/regression.hpp"

#include <cmath>
#include <string>

#include "mint/error.hpp"
#include "mint/parallel.hpp"
#include "mint/rng.hpp"

namespace mint {

namespace {

PointSet to_points(const Eigen::MatrixXd& m) {
  PointSet out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
    }
  }
  return out;
}

PointSet to_points(const Eigen::VectorXd& v) {
  PointSet out(static_cast<std::size_t>(v.size()), 1);
  for (Eigen::Index i = 0; i < v.size(); ++i) out(static_cast<std::size_t>(i), 0) = v(i);
  return out;
}

Eigen::VectorXd draw_noise(const MarginalSampler& noise, Rng& rng, std::size_t n) {
  const PointSet draws = noise.draw(rng, n);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = draws(i, 0);
  return v;
}

void check_design(const Eigen::MatrixXd& design, Eigen::Index response_size) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (p < 1) throw Error(ErrorKind::SingularDesign, "design has no columns");
  if (response_size != n) throw Error(ErrorKind::InvalidArgument, "response length differs from design rows");
  if (n <= p) {
    throw Error(ErrorKind::SingularDesign, "need more observations than covariates (n=" +
                                               std::to_string(n) + ", p=" + std::to_string(p) + ")");
  }
  if (!design.allFinite()) throw Error(ErrorKind::InvalidArgument, "design has non-finite entries");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  // cond(X^T X) = cond(X)^2
  if (!(smin > 0.0) || (sv(0) / smin) * (sv(0) / smin) >= 1e10) {
    throw Error(ErrorKind::SingularDesign, "X^T X is singular or ill-conditioned");
  }
}

// Order k clamped to the sample size when no explicit value was given.
std::size_t order_or_default(std::optional<std::size_t> explicit_k, std::size_t n) {
  return explicit_k.value_or(default_k(n));
}

struct EntropyPlan {
  std::size_t k_eta;
  std::size_t k_joint;
  WeightVector w_eta;
  WeightVector w_joint;
  std::optional<double> h_covariates;  // set for the full statistic form
};

EntropyPlan plan_for(const PointSet& covariates, const TestConfig& config, StatisticForm form) {
  const std::size_t m = covariates.size();
  const std::size_t q = covariates.dim();
  const std::size_t k_eta = order_or_default(
      config.k_marginals.empty() ? std::nullopt : std::optional<std::size_t>(config.k_marginals[0]), m);
  const std::size_t k_joint = order_or_default(config.k_joint, m);
  EntropyPlan plan{k_eta, k_joint, make_weights(k_eta, 1, config.weight_mode),
                   make_weights(k_joint, q + 1, config.weight_mode), std::nullopt};
  if (form == StatisticForm::Full) {
    const std::size_t k_x = config.k_marginals.size() > 1 ? config.k_marginals[1] : k_joint;
    plan.h_covariates = kl_entropy(covariates, k_x, make_weights(k_x, q, config.weight_mode), config.knn).value;
  }
  return plan;
}

double statistic(const PointSet& covariates, const Eigen::VectorXd& eta, const EntropyPlan& plan,
                 KnnMethod knn) {
  const PointSet e = to_points(eta);
  const double h_eta = kl_entropy_from_distances(knn_distances(e, plan.k_eta, knn), 1, plan.w_eta);
  const PointSet joint = PointSet::hstack(covariates, e);
  const double h_joint =
      kl_entropy_from_distances(knn_distances(joint, plan.k_joint, knn), joint.dim(), plan.w_joint);
  const double reduced = h_eta - h_joint;
  return plan.h_covariates ? *plan.h_covariates + reduced : reduced;
}

void check_config(const TestConfig& config) {
  if (config.resamples == 0) throw Error(ErrorKind::InvalidArgument, "B must be at least 1");
  if (!(config.level > 0.0 && config.level < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "q must lie in (0, 1)");
  }
}

// Shared by the full-data and partitioned variants: residualise through the
// whole design, measure dependence on `tested` columns.
TestOutcome full_data_test(const RegressionProblem& problem, std::size_t tested,
                           const TestConfig& config, StatisticForm form) {
  validate_problem(problem);
  check_config(config);
  if (problem.noise.dim() != 1) {
    throw Error(ErrorKind::SamplerDimensionMismatch, "noise sampler must be one-dimensional");
  }
  const auto n = static_cast<std::size_t>(problem.design.rows());
  const PointSet covariates = to_points(Eigen::MatrixXd(problem.design.leftCols(static_cast<Eigen::Index>(tested))));
  const StandardisedResiduals observed = standardise(ols_fit(problem));
  const ResidualMaker residualise(problem.design);
  const EntropyPlan plan = plan_for(covariates, config, form);

  const double t0 = statistic(covariates, observed.eta_hat, plan, config.knn);
  std::vector<double> nulls(config.resamples);
  const double root_n = std::sqrt(static_cast<double>(n));
  parallel_for(config.resamples, config.threads, [&](std::size_t b) {
    Rng rng = Rng::stream(config.seed, StreamDomain::Resample, b + 1);
    const Eigen::VectorXd r = residualise.apply(draw_noise(problem.noise, rng, n));
    const double s = r.norm() / root_n;
    nulls[b] = statistic(covariates, r / s, plan, config.knn);
  });
  auto out = make_outcome(t0, std::move(nulls), config.level, config.seed);
  out.k = plan.k_joint;
  return out;
}

}  // namespace

void validate_problem(const RegressionProblem& problem) {
  check_design(problem.design, problem.response.size());
  if (!problem.response.allFinite()) throw Error(ErrorKind::InvalidArgument, "response has non-finite entries");
  if (problem.partition) {
    const auto p = static_cast<std::size_t>(problem.design.cols());
    if (problem.partition->star + problem.partition->rest != p) {
      throw Error(ErrorKind::InvalidArgument, "partition sizes must add up to the number of columns");
    }
  }
}

OlsFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& response) {
  check_design(design, response.size());
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  OlsFit fit;
  fit.beta_hat = qr.solve(response);
  fit.residuals = response - design * fit.beta_hat;
  const double rnorm = fit.residuals.norm();
  fit.sigma_hat = rnorm / std::sqrt(static_cast<double>(design.rows()));
  fit.degenerate = rnorm <= 1e-12 * response.norm();
  return fit;
}

OlsFit ols_fit(const RegressionProblem& problem) {
  validate_problem(problem);
  return ols_fit(problem.design, problem.response);
}

StandardisedResiduals standardise(const OlsFit& fit) {
  if (fit.degenerate || !(fit.sigma_hat > 0.0)) {
    throw Error(ErrorKind::DegenerateResiduals, "residuals vanish: the response is an exact linear fit");
  }
  return {fit.residuals / fit.sigma_hat, fit.sigma_hat};
}

ResidualMaker::ResidualMaker(const Eigen::MatrixXd& design) : qr_(design), rank_(design.cols()) {}

Eigen::VectorXd ResidualMaker::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd w = qr_.householderQ().adjoint() * v;
  w.head(rank_).setZero();
  return qr_.householderQ() * w;
}

TestOutcome mint_regression(const RegressionProblem& problem, const TestConfig& config,
                            StatisticForm form) {
  return full_data_test(problem, static_cast<std::size_t>(problem.design.cols()), config, form);
}

TestOutcome mint_regression_partitioned(const RegressionProblem& problem, const TestConfig& config,
                                        StatisticForm form) {
  if (!problem.partition) throw Error(ErrorKind::InvalidArgument, "partitioned test needs a column partition");
  if (problem.partition->star < 1) {
    throw Error(ErrorKind::InvalidArgument, "partition must keep at least one tested column");
  }
  return full_data_test(problem, problem.partition->star, config, form);
}

TestOutcome mint_regression_split(const RegressionProblem& problem, const TestConfig& config,
                                  StatisticForm form) {
  validate_problem(problem);
  check_config(config);
  if (problem.noise.dim() != 1) {
    throw Error(ErrorKind::SamplerDimensionMismatch, "noise sampler must be one-dimensional");
  }
  const Eigen::Index n = problem.design.rows();
  const Eigen::Index m = n / 2;  // first half; the second half takes the remainder
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "split test needs at least 2 rows in the first half");
  const Eigen::MatrixXd x1 = problem.design.topRows(m);
  const Eigen::MatrixXd x2 = problem.design.bottomRows(n - m);
  check_design(x2, n - m);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr2(x2);
  const double root_second = std::sqrt(static_cast<double>(n - m));

  // Standardised first-half residuals from a fit on the second half.
  auto split_residuals = [&](const Eigen::VectorXd& y, bool observed) {
    const Eigen::VectorXd y2 = y.tail(n - m);
    const Eigen::VectorXd beta = qr2.solve(y2);
    const Eigen::VectorXd r2 = y2 - x2 * beta;
    const double sigma = r2.norm() / root_second;
    if (observed && (!(sigma > 0.0) || r2.norm() <= 1e-12 * y2.norm())) {
      throw Error(ErrorKind::DegenerateResiduals, "second-half residuals vanish");
    }
    return Eigen::VectorXd((y.head(m) - x1 * beta) / sigma);
  };

  const PointSet covariates = to_points(x1);
  const EntropyPlan plan = plan_for(covariates, config, form);
  const double t0 = statistic(covariates, split_residuals(problem.response, true), plan, config.knn);
  std::vector<double> nulls(config.resamples);
  parallel_for(config.resamples, config.threads, [&](std::size_t b) {
    Rng rng = Rng::stream(config.seed, StreamDomain::Resample, b + 1);
    const Eigen::VectorXd eta = draw_noise(problem.noise, rng, static_cast<std::size_t>(n));
    nulls[b] = statistic(covariates, split_residuals(eta, false), plan, config.knn);
  });
  auto out = make_outcome(t0, std::move(nulls), config.level, config.seed);
  out.k = plan.k_joint;
  return out;
}

}  // namespace mint
