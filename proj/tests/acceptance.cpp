// Acceptance suite: one PASS/FAIL line per criterion.
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mint/cli/power.hpp"
#include "mint/datagen.hpp"
#include "mint/entropy.hpp"
#include "mint/error.hpp"
#include "mint/independence.hpp"
#include "mint/knn.hpp"
#include "mint/parallel.hpp"
#include "mint/regression.hpp"
#include "mint/rng.hpp"

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kSeeds = 500;
const double kSizeBound = 0.05 + 3.0 * std::sqrt(0.05 * 0.95 / kSeeds);

int failures = 0;

void report(int id, bool pass, const std::string& name, const std::string& detail, double seconds) {
  char time[32];
  std::snprintf(time, sizeof time, "%.1fs", seconds);
  std::cout << (pass ? "PASS " : "FAIL ") << id << ' ' << name << ": " << detail << " [" << time << "]"
            << std::endl;
  failures += !pass;
}

template <class F>
void criterion(int id, const std::string& name, F body) {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(id, pass, name, detail.str(), s);
}

std::string fmt(double v, int digits = 5) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

mint::PointSet draw(std::size_t n, std::size_t d, mint::Rng& rng, bool gaussian) {
  mint::PointSet p(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) p(i, j) = gaussian ? rng.normal() : rng.uniform();
  }
  return p;
}

std::vector<std::size_t> one_to(std::size_t k) {
  std::vector<std::size_t> g(k);
  std::iota(g.begin(), g.end(), 1);
  return g;
}

// ---------------------------------------------------------------- 1
bool entropy_accuracy(std::ostream& detail) {
  struct Case {
    const char* label;
    std::size_t d;
    bool gaussian;
    double truth, tol;
  };
  const Case cases[] = {
      {"N(0,1)", 1, true, 0.5 * std::log(2 * M_PI * M_E), 0.02},
      {"U[0,1]", 1, false, 0.0, 0.02},
      {"N(0,I2)", 2, true, std::log(2 * M_PI * M_E), 0.04},
  };
  bool ok = true;
  for (const Case& c : cases) {
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      mint::Rng rng = mint::Rng::stream(1000 + s, mint::StreamDomain::Data, c.d);
      const auto points = draw(5000, c.d, rng, c.gaussian);
      const auto w = mint::make_weights(5, c.d, mint::WeightMode::AutoSolve);
      mean += mint::kl_entropy(points, 5, w).value / 20;
    }
    const bool pass = std::abs(mean - c.truth) <= c.tol;
    detail << c.label << " mean " << fmt(mean) << " vs " << fmt(c.truth) << (pass ? " ok; " : " OUT; ");
    ok &= pass;
  }
  return ok;
}

// ---------------------------------------------------------------- 2
bool sinusoidal_mi(std::ostream& detail) {
  mint::TestConfig c;
  c.k_joint = 5;
  c.k_marginals = {5, 5};
  double l1 = 0.0, l4 = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    l1 += mint::mutual_information(mint::gen_sinusoidal(1, 10000, 2000 + s), c) / 20;
    l4 += mint::mutual_information(mint::gen_sinusoidal(4, 10000, 3000 + s), c) / 20;
  }
  const bool level = std::abs(l1 - 0.0145) <= 0.01;
  const bool invariant = std::abs(l4 - l1) <= 0.01;
  detail << "l=1 mean " << fmt(l1) << " vs 0.0145 " << (level ? "ok" : "OUT") << "; l=4 mean " << fmt(l4)
         << ", |diff| " << fmt(std::abs(l4 - l1)) << (invariant ? " ok" : " OUT");
  return level && invariant;
}

// ---------------------------------------------------------------- 3 and 4
struct NullStudy {
  std::string label;
  std::function<mint::TestOutcome(std::uint64_t)> run;
  std::vector<double> p_values;
};

mint::BlockedSample uniform_pair(std::uint64_t s, std::size_t dx, std::size_t dy) {
  mint::Rng rng = mint::Rng::stream(s, mint::StreamDomain::Data, 0);
  return mint::BlockedSample::two_block(draw(200, dx, rng, false), draw(200, dy, rng, false));
}

mint::RegressionProblem null_regression(std::uint64_t s, bool squared) {
  mint::Rng rng = mint::Rng::stream(s, mint::StreamDomain::Data, 7);
  mint::RegressionProblem prob;
  prob.design.resize(200, squared ? 3 : 2);
  prob.response.resize(200);
  for (Eigen::Index i = 0; i < 200; ++i) {
    prob.design(i, 0) = rng.normal();
    prob.design(i, 1) = rng.normal();
    if (squared) prob.design(i, 2) = prob.design(i, 0) * prob.design(i, 0);
    prob.response(i) = 2.0 * prob.design(i, 0) - prob.design(i, 1) + 0.5 * rng.normal();
  }
  if (squared) prob.partition = mint::ColumnPartition{2, 1};
  return prob;
}

mint::TestConfig seeded(std::uint64_t s) {
  mint::TestConfig c;
  c.seed = s + 1;
  c.resamples = 99;
  c.level = 0.05;
  return c;
}

std::vector<NullStudy> null_studies() {
  std::vector<NullStudy> studies;
  studies.push_back({"known", [](std::uint64_t s) {
                       mint::Rng rng = mint::Rng::stream(s, mint::StreamDomain::Data, 0);
                       const auto sample = mint::BlockedSample::two_block(draw(200, 1, rng, true), draw(200, 1, rng, true));
                       return mint::mint_known(sample, mint::MarginalSampler::normal(0.0, 1.0), seeded(s));
                     }, {}});
  studies.push_back({"unknown", [](std::uint64_t s) { return mint::mint_unknown(uniform_pair(s, 2, 2), seeded(s)); }, {}});
  studies.push_back({"av", [](std::uint64_t s) {
                       return mint::mint_av(uniform_pair(s, 1, 1), one_to(20), seeded(s));
                     }, {}});
  studies.push_back({"multi", [](std::uint64_t s) {
                       mint::Rng rng = mint::Rng::stream(s, mint::StreamDomain::Data, 0);
                       const std::vector<mint::PointSet> blocks = {draw(200, 1, rng, false), draw(200, 1, rng, false),
                                                                   draw(200, 1, rng, false)};
                       return mint::mint_multi(mint::BlockedSample::from_blocks(blocks), seeded(s));
                     }, {}});
  studies.push_back({"regression", [](std::uint64_t s) { return mint::mint_regression(null_regression(s, false), seeded(s)); }, {}});
  studies.push_back({"regression-split", [](std::uint64_t s) {
                       return mint::mint_regression_split(null_regression(s, false), seeded(s));
                     }, {}});
  studies.push_back({"regression-partitioned", [](std::uint64_t s) {
                       return mint::mint_regression_partitioned(null_regression(s, true), seeded(s));
                     }, {}});
  return studies;
}

double fraction_at_most(const std::vector<double>& p, double t) {
  // p-values are multiples of 1/(B+1); allow for rounding in the division
  std::size_t c = 0;
  for (double v : p) c += v <= t + 1e-12;
  return static_cast<double>(c) / static_cast<double>(p.size());
}

// ---------------------------------------------------------------- 5
bool knn_oracle(std::ostream& detail) {
  std::size_t mismatches = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    mint::Rng rng = mint::Rng::stream(s, mint::StreamDomain::Data, 55);
    const std::size_t n = 21 + rng.below(480);
    const std::size_t d = 1 + rng.below(6);
    const std::size_t k = 1 + rng.below(20);
    const auto points = draw(n, d, rng, s % 2 == 0);
    if (!(mint::knn_distances(points, k, mint::KnnMethod::KdTree) ==
          mint::knn_distances_brute_force(points, k))) {
      ++mismatches;
    }
  }
  detail << mismatches << " of 50 instances differ";
  return mismatches == 0;
}

// ---------------------------------------------------------------- 6
bool weight_constraints(std::ostream& detail) {
  std::size_t feasible = 0, infeasible = 0, bad = 0;
  double worst_sum = 0.0, worst_moment = 0.0;
  for (std::size_t d = 4; d <= 8; ++d) {
    for (std::size_t k = d; k <= 30; ++k) {
      mint::WeightVector w(1, 1, {1.0});
      try {
        w = mint::solve_weights(k, d);
      } catch (const mint::Error&) {
        ++infeasible;
        continue;
      }
      ++feasible;
      // admissible orders are floor(m k / d) for m = 1..d, excluding 0
      std::vector<bool> allowed(k + 1, false);
      for (std::size_t m = 1; m <= d; ++m) allowed[m * k / d] = true;
      allowed[0] = false;
      long double sum = 0.0L;
      bool support = w.k() == k;
      // w[j - 1] is the weight of order j
      for (std::size_t j = 1; j <= k; ++j) {
        sum += w[j - 1];
        if (!allowed[j] && w[j - 1] != 0.0) support = false;
      }
      worst_sum = std::max(worst_sum, static_cast<double>(std::fabs(sum - 1.0L)));
      bool moments = true;
      for (std::size_t l = 1; l <= d / 4; ++l) {
        long double total = 0.0L, scale = 0.0L;
        for (std::size_t j = 1; j <= k; ++j) {
          const long double ratio = std::exp(std::lgamma(static_cast<long double>(j) + 2.0L * l / d) -
                                             std::lgamma(static_cast<long double>(j)));
          total += w[j - 1] * ratio;
          scale = std::max(scale, std::fabs(w[j - 1] * ratio));
        }
        const double rel = static_cast<double>(std::fabs(total) / scale);
        worst_moment = std::max(worst_moment, rel);
        moments &= rel <= 1e-8;
      }
      if (std::fabs(sum - 1.0L) > 1e-10 || !moments || !support) ++bad;
    }
  }
  detail << feasible << " feasible cells, " << infeasible << " infeasible, " << bad << " violating; worst |sum-1| "
         << worst_sum << ", worst relative moment " << worst_moment;
  return bad == 0 && feasible > 0;
}

// ---------------------------------------------------------------- 7
bool reduced_equivalence(std::ostream& detail) {
  std::size_t differ = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    mint::Rng rng = mint::Rng::stream(s, mint::StreamDomain::Data, 77);
    const std::size_t dx = 1 + rng.below(2), dy = 1 + rng.below(2);
    auto x = draw(120, dx, rng, true), y = draw(120, dy, rng, true);
    if (s % 2) {
      for (std::size_t i = 0; i < 120; ++i) y(i, 0) += 0.3 * x(i, 0) * x(i, 0);
    }
    const auto sample = mint::BlockedSample::two_block(x, y);
    mint::TestConfig c = seeded(s);
    c.k_joint = 2 + rng.below(8);
    c.k_marginals = {c.k_joint.value(), c.k_joint.value()};
    const auto reduced = mint::mint_unknown(sample, c, mint::StatisticForm::Reduced);
    const auto full = mint::mint_unknown(sample, c, mint::StatisticForm::Full);
    differ += reduced.reject != full.reject || reduced.p_value != full.p_value;
  }
  detail << differ << " of 50 datasets differ in decision or p-value";
  return differ == 0;
}

// ---------------------------------------------------------------- 8
bool regression_invariance(std::ostream& detail) {
  std::size_t differ = 0, compared = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    mint::Rng rng = mint::Rng::stream(s, mint::StreamDomain::Data, 88);
    auto prob = null_regression(s, true);
    if (s % 3 == 0) {
      for (Eigen::Index i = 0; i < prob.response.size(); ++i) prob.response(i) *= 1.0 + std::abs(prob.design(i, 0));
    }
    Eigen::VectorXd c(prob.design.cols());
    for (Eigen::Index j = 0; j < c.size(); ++j) c(j) = 5.0 * rng.normal();
    mint::TestConfig config = seeded(s);
    config.resamples = 49;
    const auto reference = std::array{mint::mint_regression(prob, config).p_value,
                                      mint::mint_regression_split(prob, config).p_value,
                                      mint::mint_regression_partitioned(prob, config).p_value};
    for (double a : {0.1, 1.0, 10.0}) {
      auto moved = prob;
      moved.response = a * prob.response + prob.design * c;
      const auto got = std::array{mint::mint_regression(moved, config).p_value,
                                  mint::mint_regression_split(moved, config).p_value,
                                  mint::mint_regression_partitioned(moved, config).p_value};
      for (std::size_t v = 0; v < 3; ++v) differ += got[v] != reference[v];
      compared += 3;
    }
  }
  detail << differ << " of " << compared << " transformed p-values differ";
  return differ == 0;
}

// ---------------------------------------------------------------- 9
bool power_properties(std::ostream& detail) {
  using namespace mint::cli;
  PowerConfig sin;
  sin.settings = {mint::Setting::Sinusoidal};
  sin.parameters = {1, 2, 3, 4, 5, 6};
  sin.variants = {Variant::Unknown};
  sin.k_grid = one_to(20);
  sin.reps = 200;
  sin.seed = 9;
  sin.threads = mint::default_thread_count();
  const auto rows = run_power(sin);
  std::vector<double> best(6, 0.0);
  for (const auto& row : rows) {
    if (row.status != "ok") throw std::runtime_error("power cell failed: " + row.status);
    const auto l = static_cast<std::size_t>(row.parameter);
    best[l - 1] = std::max(best[l - 1], row.rejection_rate);
  }
  const bool a = best[0] > 0.5;
  bool b = true;
  for (std::size_t l = 1; l < 6; ++l) {
    const double se = std::sqrt((best[l] * (1 - best[l]) + best[l - 1] * (1 - best[l - 1])) / 200.0);
    b &= best[l] - best[l - 1] <= 2.0 * se;
  }

  PowerConfig mult = sin;
  mult.settings = {mint::Setting::Multiplicative};
  mult.parameters = {0.0};
  mult.k_grid = {mint::default_k(200)};
  const double size = run_power(mult).front().rejection_rate;
  const bool c = size <= kSizeBound;

  std::size_t differ = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto sample = mint::gen_sinusoidal(1, 200, 4000 + s);
    for (std::size_t k : {1, 5, 12}) {
      mint::TestConfig config = seeded(s);
      config.k_joint = k;
      config.weight_mode = mint::WeightMode::Unweighted;
      const std::vector<std::size_t> grid = {k};
      differ += mint::mint_av(sample, grid, config).reject != mint::mint_unknown(sample, config).reject;
    }
  }
  const bool d = differ == 0;

  detail << "(a) best-k power at l=1 " << fmt(best[0], 3) << (a ? " ok" : " LOW") << "; (b) power by l";
  for (double p : best) detail << ' ' << fmt(p, 3);
  detail << (b ? " ok" : " INCREASES") << "; (c) rho=0 rejection " << fmt(size, 3) << (c ? " ok" : " HIGH")
         << "; (d) " << differ << " av/unknown decision mismatches";
  return a && b && c && d;
}

// ---------------------------------------------------------------- 10
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool determinism(std::ostream& detail, const std::string& cli, const fs::path& work) {
  fs::remove_all(work);
  fs::create_directories(work);
  auto sh = [&](const std::string& threads, const std::string& args) {
    const std::string cmd = "cd '" + work.string() + "' && MINT_THREADS=" + threads + " '" + cli + "' " + args +
                            " >/dev/null 2>>errors.log";
    return std::system(cmd.c_str());
  };
  if (sh("1", "gen --setting circular --param 2 -n 150 --seed 5 -o data.csv") != 0) {
    detail << "gen failed";
    return false;
  }
  sh("1", "gen --setting gaussian-null -n 60 --seed 8 -o reg.csv");
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"gen.csv", "gen --setting sinusoidal --param 3 -n 300 --multivariate --seed 11"},
      {"entropy.json", "entropy -i data.csv -k 4"},
      {"known.json", "test known -i data.csv -x x1 -y y1 --marginal normal(0,2)"},
      {"unknown.json", "test unknown -i data.csv -x 1 -y 2 -k 4"},
      {"auto.json", "test auto -i data.csv -x 1 -y 2 --k-grid 1-10 --pairs 20"},
      {"av.json", "test av -i data.csv -x 1 -y 2 --k-grid 1-10"},
      {"multi.json", "test multi -i data.csv --block 1 --block 2"},
      {"regression.json", "regression -i reg.csv --response y1 --design x1 --variant split -k 2 --k-eta 3"},
      {"power.csv", "power --setting sinusoidal,multiplicative --params 1,2 --variants unknown,av --k-grid 2-4 "
                    "--reps 12 -n 80"},
  };
  std::size_t compared = 0, differ = 0;
  for (const auto& [file, args] : runs) {
    std::string quoted = args;
    for (std::size_t pos = 0; (pos = quoted.find('(', pos)) != std::string::npos;) {
      const auto start = quoted.rfind(' ', pos) + 1;
      const auto end = quoted.find(')', pos) + 1;
      quoted = quoted.substr(0, start) + "'" + quoted.substr(start, end - start) + "'" + quoted.substr(end);
      pos = end + 2;
    }
    if (sh("1", quoted + " -o " + file) != 0) {
      detail << file << " failed; ";
      ++differ;
      continue;
    }
    for (const char* threads : {"1", "4"}) {
      const std::string copy = file + ".rerun" + threads;
      if (sh(threads, "rerun " + file + ".manifest.json -o " + copy) != 0) {
        detail << file << " rerun failed; ";
        ++differ;
        continue;
      }
      ++compared;
      if (slurp(work / file) != slurp(work / copy)) {
        detail << file << " differs with MINT_THREADS=" << threads << "; ";
        ++differ;
      }
    }
  }
  detail << compared << " reruns compared, " << differ << " problems";
  return differ == 0 && compared == 2 * runs.size();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cli;
  std::string workdir = (fs::temp_directory_path() / "mint_acceptance").string();
  app.add_option("--cli", cli, "path to the mint executable")->required();
  app.add_option("--workdir", workdir, "scratch directory");
  CLI11_PARSE(app, argc, argv);
  cli = fs::absolute(cli).string();

  criterion(1, "entropy accuracy", entropy_accuracy);
  criterion(2, "sinusoidal mutual information", sinusoidal_mi);

  // 3 and 4 share the Monte Carlo runs.
  const auto start = std::chrono::steady_clock::now();
  auto studies = null_studies();
  std::ostringstream size_detail, uniform_detail;
  bool size_ok = true, uniform_ok = true;
  std::string error;
  try {
    for (auto& study : studies) {
      for (std::uint64_t s = 0; s < kSeeds; ++s) study.p_values.push_back(study.run(s).p_value);
      const double rate = fraction_at_most(study.p_values, 0.05);
      const bool pass = rate <= kSizeBound;
      size_ok &= pass;
      size_detail << study.label << ' ' << fmt(rate, 3) << (pass ? "" : " HIGH") << "; ";
      for (double t : {0.01, 0.05, 0.1, 0.2}) {
        const double f = fraction_at_most(study.p_values, t);
        const bool ok = f <= t + 3.0 * std::sqrt(t * (1 - t) / kSeeds);
        uniform_ok &= ok;
        if (!ok) uniform_detail << study.label << " P(p<=" << t << ")=" << fmt(f, 3) << " HIGH; ";
      }
    }
  } catch (const std::exception& e) {
    error = e.what();
    size_ok = uniform_ok = false;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(3, size_ok, "size control", error.empty() ? size_detail.str() + "bound " + fmt(kSizeBound, 4) : error,
         seconds);
  report(4, uniform_ok, "p-value super-uniformity",
         error.empty() ? (uniform_ok ? "all 7 tests within bounds at t = 0.01, 0.05, 0.1, 0.2" : uniform_detail.str())
                       : error,
         seconds);

  criterion(5, "kd-tree equals brute force", knn_oracle);
  criterion(6, "weight constraints", weight_constraints);
  criterion(7, "reduced statistic equivalence", reduced_equivalence);
  criterion(8, "regression invariance", regression_invariance);
  criterion(9, "power properties", power_properties);
  criterion(10, "rerun determinism",
            [&](std::ostream& detail) { return determinism(detail, cli, fs::path(workdir)); });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion failure(s)")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
