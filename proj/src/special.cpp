#include <cmath>
#include <numbers>
#include <string>

#include "mint/entropy.hpp"
#include "mint/error.hpp"

namespace mint {

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorKind::DomainError, "digamma requires a finite x > 0, got " + std::to_string(x));
  }
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli-number tail: B_2k / (2k x^2k) for k = 1..7.
  const double tail =
      inv2 * (1.0 / 12 -
      inv2 * (1.0 / 120 -
      inv2 * (1.0 / 252 -
      inv2 * (1.0 / 240 -
      inv2 * (1.0 / 132 -
      inv2 * (691.0 / 32760 -
      inv2 * (1.0 / 12)))))));
  return result + std::log(x) - 0.5 * inv - tail;
}

double unit_ball_volume(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  // V_d = V_{d-2} * 2 pi / d, seeded by V_1 = 2 and V_2 = pi.
  double v = (d % 2 == 1) ? 2.0 : std::numbers::pi;
  for (std::size_t m = (d % 2 == 1) ? 3 : 4; m <= d; m += 2) {
    v *= 2.0 * std::numbers::pi / static_cast<double>(m);
  }
  return v;
}

double log_unit_ball_volume(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  double v = (d % 2 == 1) ? std::log(2.0) : std::log(std::numbers::pi);
  for (std::size_t m = (d % 2 == 1) ? 3 : 4; m <= d; m += 2) {
    v += std::log(2.0 * std::numbers::pi / static_cast<double>(m));
  }
  return v;
}

}  // namespace mint
