// Monte Carlo checks of power and size. Slower than the unit suite.
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "mint/datagen.hpp"
#include "mint/entropy.hpp"
#include "mint/independence.hpp"
#include "mint/regression.hpp"
#include "mint/rng.hpp"

namespace {

mint::TestConfig config(std::uint64_t seed, std::size_t k = 6) {
  mint::TestConfig c;
  c.seed = seed;
  c.k_joint = k;
  c.k_marginals = {k, k};
  return c;
}

mint::PointSet column(std::size_t n, mint::Rng& rng, bool gaussian) {
  mint::PointSet p(n, 1);
  for (std::size_t i = 0; i < n; ++i) p(i, 0) = gaussian ? rng.normal() : rng.uniform();
  return p;
}

std::vector<std::size_t> one_to(std::size_t k) {
  std::vector<std::size_t> g(k);
  std::iota(g.begin(), g.end(), 1);
  return g;
}

}  // namespace

TEST_CASE("gaussian mutual information at rho = 0.5") {
  const double truth = -0.5 * std::log(1.0 - 0.25);
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    mean += mint::mutual_information(mint::gen_gaussian_corr(0.5, 5000, 70 + s), config(0, 5)) / 3;
  }
  CHECK(std::abs(mean - truth) < 0.02);
}

TEST_CASE("entropy estimates converge as n grows") {
  // 1-d standard normal: error at n = 20000 is well below the error at n = 500
  const double truth = 0.5 * std::log(2 * M_PI * M_E);
  double small = 0.0, large = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    mint::Rng a = mint::Rng::stream(s, mint::StreamDomain::Data, 0);
    mint::Rng b = mint::Rng::stream(s, mint::StreamDomain::Data, 1);
    const auto w = mint::make_weights(5, 1, mint::WeightMode::AutoSolve);
    small += std::abs(mint::kl_entropy(column(500, a, true), 5, w).value - truth) / 10;
    large += std::abs(mint::kl_entropy(column(20000, b, true), 5, w).value - truth) / 10;
  }
  CHECK(large < small);
  CHECK(large < 0.01);
}

TEST_CASE("known-marginal test detects near-deterministic dependence") {
  int rejections = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    mint::Rng rng = mint::Rng::stream(s, mint::StreamDomain::Data, 0);
    mint::PointSet x = column(200, rng, true), y(200, 1);
    for (std::size_t i = 0; i < 200; ++i) y(i, 0) = x(i, 0) + 0.05 * rng.normal();
    // Y = X + 0.05 e has variance 1.0025
    const auto out = mint::mint_known(mint::BlockedSample::two_block(x, y),
                                      mint::MarginalSampler::normal(0.0, 1.0025), config(s));
    rejections += out.p_value <= 0.05;
  }
  CHECK(rejections >= 180);
}

TEST_CASE("auto selection keeps its size under independence") {
  int rejections = 0;
  const auto grid = one_to(20);
  for (std::uint64_t s = 0; s < 200; ++s) {
    mint::Rng rng = mint::Rng::stream(s, mint::StreamDomain::Data, 0);
    mint::PointSet x(200, 1), y(200, 1);
    for (std::size_t i = 0; i < 200; ++i) {
      x(i, 0) = rng.uniform(-M_PI, M_PI);
      y(i, 0) = rng.uniform(-M_PI, M_PI);
    }
    const auto out = mint::mint_auto(mint::BlockedSample::two_block(x, y), grid, 100, config(s));
    REQUIRE(out.k_hat.has_value());
    CHECK(*out.k_hat >= 1);
    CHECK(*out.k_hat <= 20);
    rejections += out.reject;
  }
  // 0.05 + 3 sd of a binomial proportion over 200 runs
  CHECK(rejections / 200.0 <= 0.05 + 3 * std::sqrt(0.05 * 0.95 / 200));
}

TEST_CASE("auto runs end to end on the sinusoidal setting") {
  const auto sample = mint::gen_sinusoidal(2, 200, 5);
  const auto out = mint::mint_auto(sample, one_to(20), 100, config(5));
  CHECK(out.k_hat.has_value());
  CHECK(out.p_value > 0.0);
}

TEST_CASE("multiscale averaging beats data-driven k for multiplicative dependence") {
  int av = 0, automatic = 0;
  const auto grid = one_to(20);
  // At rho = 1 both tests reject every time at n = 200, so compare at 0.5.
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto sample = mint::gen_multiplicative(0.5, 200, 900 + s);
    av += mint::mint_av(sample, grid, config(s)).reject;
    automatic += mint::mint_auto(sample, grid, 100, config(s)).reject;
  }
  MESSAGE("av " << av << " auto " << automatic);
  CHECK(av > automatic);
}

TEST_CASE("mutual independence test power for three blocks") {
  int rejections = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    mint::Rng rng = mint::Rng::stream(s, mint::StreamDomain::Data, 0);
    mint::PointSet x = column(200, rng, false), y(200, 1), u = column(200, rng, false);
    for (std::size_t i = 0; i < 200; ++i) y(i, 0) = x(i, 0) + 0.01 * rng.normal();
    const std::vector<mint::PointSet> blocks = {x, y, u};
    mint::TestConfig c;
    c.seed = s;
    rejections += mint::mint_multi(mint::BlockedSample::from_blocks(blocks), c).reject;
  }
  CHECK(rejections >= 180);
}

TEST_CASE("regression test detects heteroscedastic errors") {
  int rejections = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    mint::Rng rng = mint::Rng::stream(s, mint::StreamDomain::Data, 0);
    mint::RegressionProblem prob;
    prob.design.resize(200, 2);
    prob.response.resize(200);
    for (Eigen::Index i = 0; i < 200; ++i) {
      prob.design(i, 0) = rng.normal();
      prob.design(i, 1) = rng.normal();
      prob.response(i) = prob.design(i, 0) - prob.design(i, 1) + std::abs(prob.design(i, 0)) * rng.normal();
    }
    mint::TestConfig c;
    c.seed = s;
    c.k_joint = 3;
    c.k_marginals = {6};
    rejections += mint::mint_regression(prob, c).reject;
  }
  MESSAGE("heteroscedastic power " << rejections / 200.0);
  CHECK(rejections > 100);
}
