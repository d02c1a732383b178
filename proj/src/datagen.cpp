#include "mint/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mint/error.hpp"
#include "mint/rng.hpp"

namespace mint {

std::string to_string(Setting setting) {
  switch (setting) {
    case Setting::Sinusoidal: return "sinusoidal";
    case Setting::Circular: return "circular";
    case Setting::Multiplicative: return "multiplicative";
    case Setting::GaussianNull: return "gaussian-null";
    case Setting::GaussianCorr: return "gaussian-corr";
  }
  return "unknown";
}

Setting parse_setting(std::string_view name) {
  for (Setting s : {Setting::Sinusoidal, Setting::Circular, Setting::Multiplicative,
                    Setting::GaussianNull, Setting::GaussianCorr}) {
    if (name == to_string(s)) return s;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown setting '" + std::string(name) + "'");
}

namespace {

constexpr double kPi = std::numbers::pi;

void check_n(std::size_t n) {
  if (n < 4) throw Error(ErrorKind::InvalidArgument, "scenario needs n >= 4");
}

void check_l(unsigned l) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "l must be a positive integer");
}

BlockedSample pairs(PointSet xy) {
  BlockedSample out;
  out.points = std::move(xy);
  out.block_widths = {1, 1};
  return out;
}

// One |X|^rho * e draw; shared by the generator and the Y-marginal sampler.
double multiplicative_y(double x, double rho, Rng& rng) {
  const double e = rng.normal();
  return (rho == 0.0 ? 1.0 : std::pow(std::abs(x), rho)) * e;
}

double circular_coordinate(unsigned l, Rng& rng, bool sine) {
  const std::size_t pick = std::min<std::size_t>(static_cast<std::size_t>(l * rng.uniform()), l - 1);
  const double radius = static_cast<double>(pick + 1);
  const double angle = rng.uniform(0.0, 2.0 * kPi);
  const double e = rng.normal();
  return radius * (sine ? std::sin(angle) : std::cos(angle)) + e / 4.0;
}

}  // namespace

BlockedSample gen_sinusoidal(unsigned l, std::size_t n, std::uint64_t seed) {
  check_l(l);
  check_n(n);
  Rng rng = Rng::stream(seed, StreamDomain::Data, 0);
  PointSet xy(n, 2);
  const double freq = static_cast<double>(l);
  for (std::size_t i = 0; i < n;) {
    const double x = rng.uniform(-kPi, kPi);
    const double y = rng.uniform(-kPi, kPi);
    const double accept = 0.5 * (1.0 + std::sin(freq * x) * std::sin(freq * y));
    if (rng.uniform() < accept) {
      xy(i, 0) = x;
      xy(i, 1) = y;
      ++i;
    }
  }
  return pairs(std::move(xy));
}

BlockedSample gen_circular(unsigned l, std::size_t n, std::uint64_t seed) {
  check_l(l);
  check_n(n);
  Rng rng = Rng::stream(seed, StreamDomain::Data, 0);
  PointSet xy(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pick = std::min<std::size_t>(static_cast<std::size_t>(l * rng.uniform()), l - 1);
    const double radius = static_cast<double>(pick + 1);
    const double angle = rng.uniform(0.0, 2.0 * kPi);
    const double e1 = rng.normal();
    const double e2 = rng.normal();
    xy(i, 0) = radius * std::cos(angle) + e1 / 4.0;
    xy(i, 1) = radius * std::sin(angle) + e2 / 4.0;
  }
  return pairs(std::move(xy));
}

BlockedSample gen_multiplicative(double rho, std::size_t n, std::uint64_t seed) {
  if (!(rho >= 0.0)) throw Error(ErrorKind::InvalidArgument, "rho must be non-negative");
  check_n(n);
  Rng rng = Rng::stream(seed, StreamDomain::Data, 0);
  PointSet xy(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    xy(i, 0) = x;
    xy(i, 1) = multiplicative_y(x, rho, rng);
  }
  return pairs(std::move(xy));
}

BlockedSample gen_gaussian_null(std::size_t n, std::uint64_t seed) {
  return gen_gaussian_corr(0.0, n, seed);
}

BlockedSample gen_gaussian_corr(double rho, std::size_t n, std::uint64_t seed) {
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidArgument, "correlation must lie in [0, 1)");
  check_n(n);
  Rng rng = Rng::stream(seed, StreamDomain::Data, 0);
  PointSet xy(n, 2);
  const double tail = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    xy(i, 0) = z1;
    xy(i, 1) = rho * z1 + tail * z2;
  }
  return pairs(std::move(xy));
}

BlockedSample make_multivariate(const BlockedSample& sample, std::uint64_t seed) {
  if (sample.block_widths != std::vector<std::size_t>{1, 1}) {
    throw Error(ErrorKind::InvalidArgument, "make_multivariate needs two 1-d blocks");
  }
  Rng rng = Rng::stream(seed, StreamDomain::Data, 1);
  const std::size_t n = sample.size();
  PointSet out(n, 4);
  for (std::size_t i = 0; i < n; ++i) {
    out(i, 0) = sample.points(i, 0);
    out(i, 1) = rng.uniform();
    out(i, 2) = sample.points(i, 1);
    out(i, 3) = rng.uniform();
  }
  BlockedSample result;
  result.points = std::move(out);
  result.block_widths = {2, 2};
  return result;
}

namespace {

unsigned as_level(double parameter) {
  if (!(parameter >= 1.0) || parameter != std::floor(parameter)) {
    throw Error(ErrorKind::InvalidArgument, "l must be a positive integer");
  }
  return static_cast<unsigned>(parameter);
}

}  // namespace

BlockedSample generate(const ScenarioSpec& spec) {
  BlockedSample base;
  switch (spec.setting) {
    case Setting::Sinusoidal: base = gen_sinusoidal(as_level(spec.parameter), spec.n, spec.seed); break;
    case Setting::Circular: base = gen_circular(as_level(spec.parameter), spec.n, spec.seed); break;
    case Setting::Multiplicative: base = gen_multiplicative(spec.parameter, spec.n, spec.seed); break;
    case Setting::GaussianNull: base = gen_gaussian_null(spec.n, spec.seed); break;
    case Setting::GaussianCorr: base = gen_gaussian_corr(spec.parameter, spec.n, spec.seed); break;
  }
  return spec.multivariate ? make_multivariate(base, spec.seed) : base;
}

MarginalSampler y_marginal(const ScenarioSpec& spec) {
  std::function<double(Rng&)> coordinate;
  std::string name;
  switch (spec.setting) {
    case Setting::Sinusoidal:
      coordinate = [](Rng& rng) { return rng.uniform(-kPi, kPi); };
      name = "uniform(-pi,pi)";
      break;
    case Setting::Circular: {
      const unsigned l = as_level(spec.parameter);
      coordinate = [l](Rng& rng) { return circular_coordinate(l, rng, true); };
      name = "circular-y(" + std::to_string(l) + ")";
      break;
    }
    case Setting::Multiplicative: {
      const double rho = spec.parameter;
      coordinate = [rho](Rng& rng) { return multiplicative_y(rng.uniform(-1.0, 1.0), rho, rng); };
      name = "multiplicative-y";
      break;
    }
    case Setting::GaussianNull:
    case Setting::GaussianCorr:
      coordinate = [](Rng& rng) { return rng.normal(); };
      name = "normal(0,1)";
      break;
  }
  const bool extra = spec.multivariate;
  return MarginalSampler(
      extra ? 2 : 1,
      [coordinate, extra](Rng& rng, std::size_t n) {
        PointSet out(n, extra ? 2 : 1);
        for (std::size_t i = 0; i < n; ++i) {
          out(i, 0) = coordinate(rng);
          if (extra) out(i, 1) = rng.uniform();
        }
        return out;
      },
      extra ? name + " x uniform(0,1)" : name);
}

}  // namespace mint
