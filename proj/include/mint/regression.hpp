#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "mint/independence.hpp"
#include "mint/sampler.hpp"

namespace mint {

struct ColumnPartition {
  std::size_t star = 0;   // leading columns tested against the errors
  std::size_t rest = 0;   // trailing columns used only in the fit
};

struct RegressionProblem {
  Eigen::MatrixXd design;
  Eigen::VectorXd response;
  std::optional<ColumnPartition> partition;
  MarginalSampler noise = MarginalSampler::normal(0.0, 1.0);
};

/// Throws SingularDesign unless n > p and cond(X^T X) < 1e10.
void validate_problem(const RegressionProblem& problem);

struct OlsFit {
  Eigen::VectorXd beta_hat;
  Eigen::VectorXd residuals;
  double sigma_hat = 0.0;    // sqrt(|residuals|^2 / n)
  bool degenerate = false;   // residuals vanish relative to the response
};

/// Least squares via column-pivoted Householder QR.
OlsFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& response);
OlsFit ols_fit(const RegressionProblem& problem);

struct StandardisedResiduals {
  Eigen::VectorXd eta_hat;   // residuals / sigma_hat, so |eta_hat|^2 = n
  double sigma_hat = 0.0;
};

/// Throws DegenerateResiduals for a degenerate fit.
StandardisedResiduals standardise(const OlsFit& fit);

/// Orthogonal projection onto the complement of the design's column space,
/// applied through a stored QR factorisation.
class ResidualMaker {
 public:
  explicit ResidualMaker(const Eigen::MatrixXd& design);
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

 private:
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
  Eigen::Index rank_;
};

/// Goodness-of-fit test of the linear model: independence of the covariates
/// and standardised residuals, calibrated with simulated noise from
/// problem.noise. k_marginals[0] is the residual order, k_joint the joint
/// order.
TestOutcome mint_regression(const RegressionProblem& problem, const TestConfig& config,
                            StatisticForm form = StatisticForm::Reduced);

/// Sample-splitting variant: coefficients and scale are fitted on the second
/// half (rows floor(n/2)..n-1), the statistic uses the first half.
TestOutcome mint_regression_split(const RegressionProblem& problem,
                                  const TestConfig& config,
                                  StatisticForm form = StatisticForm::Reduced);

/// Tests the errors against the leading partition.star columns only; the fit
/// and residual simulation use the whole design.
TestOutcome mint_regression_partitioned(const RegressionProblem& problem,
                                        const TestConfig& config,
                                        StatisticForm form = StatisticForm::Reduced);

}  // namespace mint
