#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "mint/independence.hpp"
#include "mint/sampler.hpp"

namespace mint {

enum class Setting { Sinusoidal, Circular, Multiplicative, GaussianNull, GaussianCorr };

std::string to_string(Setting setting);
Setting parse_setting(std::string_view name);

struct ScenarioSpec {
  Setting setting = Setting::GaussianNull;
  double parameter = 0.0;   // l for sinusoidal/circular, rho otherwise
  std::size_t n = 200;
  bool multivariate = false;
  std::uint64_t seed = 0;
};

/// Draws from f_l(x, y) = {1 + sin(lx) sin(ly)} / pi^2 on [-pi, pi]^2 by
/// rejection from the uniform square.
BlockedSample gen_sinusoidal(unsigned l, std::size_t n, std::uint64_t seed);

/// X = L cos(T) + e1/4, Y = L sin(T) + e2/4 with L uniform on {1..l}.
BlockedSample gen_circular(unsigned l, std::size_t n, std::uint64_t seed);

/// X ~ U[-1, 1], Y = |X|^rho * e with e ~ N(0, 1).
BlockedSample gen_multiplicative(double rho, std::size_t n, std::uint64_t seed);

/// Independent standard normal X and Y.
BlockedSample gen_gaussian_null(std::size_t n, std::uint64_t seed);

/// Standard bivariate normal with correlation rho in [0, 1).
BlockedSample gen_gaussian_corr(double rho, std::size_t n, std::uint64_t seed);

/// Appends an independent U(0, 1) column to each of two 1-d blocks.
BlockedSample make_multivariate(const BlockedSample& sample, std::uint64_t seed);

BlockedSample generate(const ScenarioSpec& spec);

/// Sampler for the Y block's marginal under the scenario, used as the known
/// marginal in mint_known.
MarginalSampler y_marginal(const ScenarioSpec& spec);

}  // namespace mint
