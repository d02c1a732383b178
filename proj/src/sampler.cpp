#include "mint/sampler.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/random/student_t_distribution.hpp>

#include "mint/error.hpp"

namespace mint {

MarginalSampler::MarginalSampler(std::size_t dim, DrawFn draw, std::string description)
    : dim_(dim), draw_(std::move(draw)), description_(std::move(description)) {
  if (dim_ == 0) throw Error(ErrorKind::InvalidArgument, "sampler dimension must be positive");
  if (!draw_) throw Error(ErrorKind::InvalidArgument, "sampler needs a draw function");
}

PointSet MarginalSampler::draw(Rng& rng, std::size_t n) const {
  PointSet out = draw_(rng, n);
  if (out.size() != n || out.dim() != dim_) {
    throw Error(ErrorKind::SamplerDimensionMismatch,
                "sampler '" + description_ + "' returned the wrong shape");
  }
  return out;
}

namespace {

std::string format_call(const std::string& name, std::initializer_list<double> args) {
  std::ostringstream out;
  out.precision(17);
  out << name << '(';
  bool first = true;
  for (double a : args) {
    if (!first) out << ',';
    out << a;
    first = false;
  }
  out << ')';
  return out.str();
}

template <class Coordinate>
MarginalSampler::DrawFn per_coordinate(std::size_t dim, Coordinate coordinate) {
  return [dim, coordinate](Rng& rng, std::size_t n) {
    PointSet out(n, dim);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < dim; ++t) out(i, t) = coordinate(rng);
    }
    return out;
  };
}

}  // namespace

MarginalSampler MarginalSampler::normal(double mean, double variance, std::size_t dim) {
  if (!(variance > 0.0)) throw Error(ErrorKind::InvalidArgument, "normal variance must be positive");
  const double sd = std::sqrt(variance);
  return {dim, per_coordinate(dim, [mean, sd](Rng& rng) { return mean + sd * rng.normal(); }),
          format_call("normal", {mean, variance})};
}

MarginalSampler MarginalSampler::uniform(double lo, double hi, std::size_t dim) {
  if (!(hi > lo)) throw Error(ErrorKind::InvalidArgument, "uniform needs lo < hi");
  return {dim, per_coordinate(dim, [lo, hi](Rng& rng) { return rng.uniform(lo, hi); }),
          format_call("uniform", {lo, hi})};
}

MarginalSampler MarginalSampler::student_t(double nu, std::size_t dim) {
  if (!(nu > 2.0)) throw Error(ErrorKind::InvalidArgument, "t noise needs more than 2 degrees of freedom");
  const double scale = std::sqrt((nu - 2.0) / nu);
  return {dim,
          per_coordinate(dim,
                         [nu, scale](Rng& rng) {
                           boost::random::student_t_distribution<double> dist(nu);
                           return scale * dist(rng);
                         }),
          format_call("t", {nu})};
}

MarginalSampler MarginalSampler::logistic(std::size_t dim) {
  const double scale = std::sqrt(3.0) / std::numbers::pi;
  return {dim,
          per_coordinate(dim,
                         [scale](Rng& rng) {
                           double u = rng.uniform();
                           while (u == 0.0) u = rng.uniform();
                           return scale * std::log(u / (1.0 - u));
                         }),
          "logistic"};
}

MarginalSampler MarginalSampler::empirical(PointSet pool) {
  const std::size_t dim = pool.dim();
  const std::size_t rows = pool.size();
  if (rows == 0) throw Error(ErrorKind::InvalidArgument, "empirical pool is empty");
  auto shared = std::make_shared<const PointSet>(std::move(pool));
  return {dim,
          [shared](Rng& rng, std::size_t n) {
            const std::size_t m = shared->size();
            if (n > m) {
              throw Error(ErrorKind::InvalidArgument,
                          "empirical pool has " + std::to_string(m) + " rows, need " +
                              std::to_string(n));
            }
            // Partial Fisher-Yates: the first n slots form a uniform subset.
            std::vector<std::size_t> idx(m);
            for (std::size_t i = 0; i < m; ++i) idx[i] = i;
            PointSet out(n, shared->dim());
            for (std::size_t i = 0; i < n; ++i) {
              const std::size_t j = i + rng.below(m - i);
              std::swap(idx[i], idx[j]);
              auto src = shared->row(idx[i]);
              std::copy(src.begin(), src.end(), out.row(i).begin());
            }
            return out;
          },
          "empirical(" + std::to_string(rows) + " rows)"};
}

namespace {

std::vector<double> parse_args(std::string_view body, std::string_view spec) {
  std::vector<double> args;
  std::string text(body);
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument("trailing");
      args.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad number in sampler spec '" + std::string(spec) + "'");
    }
  }
  return args;
}

}  // namespace

MarginalSampler MarginalSampler::parse(std::string_view spec, std::size_t dim) {
  std::string_view name = spec;
  std::vector<double> args;
  if (const auto open = spec.find('('); open != std::string_view::npos) {
    if (spec.back() != ')') {
      throw Error(ErrorKind::InvalidArgument, "unterminated sampler spec '" + std::string(spec) + "'");
    }
    name = spec.substr(0, open);
    args = parse_args(spec.substr(open + 1, spec.size() - open - 2), spec);
  }
  auto need = [&](std::size_t count) {
    if (args.size() != count) {
      throw Error(ErrorKind::InvalidArgument,
                  "sampler '" + std::string(name) + "' takes " + std::to_string(count) + " arguments");
    }
  };
  if (name == "normal" && args.empty() && name.size() == spec.size()) return normal(0.0, 1.0, dim);
  if (name == "normal") {
    need(2);
    return normal(args[0], args[1], dim);
  }
  if (name == "standard-normal") {
    need(0);
    return normal(0.0, 1.0, dim);
  }
  if (name == "uniform") {
    need(2);
    return uniform(args[0], args[1], dim);
  }
  if (name == "t") {
    need(1);
    return student_t(args[0], dim);
  }
  if (name == "logistic") {
    need(0);
    return logistic(dim);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown sampler family '" + std::string(name) + "'");
}

}  // namespace mint
