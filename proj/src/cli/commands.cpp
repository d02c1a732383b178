#include "mint/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mint/cli/csv.hpp"
#include "mint/cli/manifest.hpp"
#include "mint/cli/power.hpp"
#include "mint/datagen.hpp"
#include "mint/entropy.hpp"
#include "mint/independence.hpp"
#include "mint/parallel.hpp"
#include "mint/regression.hpp"
#include "mint/rng.hpp"

namespace mint::cli {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::SamplerDimensionMismatch: return kUsageFailure;
    case ErrorKind::SingularDesign: return kSingularDesign;
    case ErrorKind::DegenerateResiduals: return kDegenerateResiduals;
    case ErrorKind::DuplicatePoints:
    case ErrorKind::KTooLarge:
    case ErrorKind::DomainError:
    case ErrorKind::InfeasibleSupport:
    case ErrorKind::IllConditioned: return kEstimatorFailure;
  }
  return kFailure;
}

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string output;
  std::string manifest;
};

struct EntropyArgs {
  std::string input, columns, weights = "auto", knn = "kdtree";
  std::optional<std::size_t> k;
  bool jitter = false;
};

struct TestArgs {
  std::string variant, input, x_cols, y_cols, k_grid = "1-20", marginal, marginal_file;
  std::string weights = "auto", knn = "kdtree";
  std::vector<std::string> blocks;
  std::optional<std::size_t> k, k_x, k_y;
  std::size_t pairs = 100, resamples = 99;
  double level = 0.05;
  bool jitter = false;
};

struct RegressionArgs {
  std::string input, response, design, star, variant = "full", noise = "normal(0,1)", knn = "kdtree";
  std::size_t k_eta = 6, k = 3, resamples = 99;
  double level = 0.05;
};

struct PowerArgs {
  std::string settings, params = "1", variants = "unknown", k_grid = "1-20", weights = "auto";
  std::size_t pairs = 100, n = 200, resamples = 99, reps = 100;
  double level = 0.05;
  bool multivariate = false;
};

struct GenArgs {
  std::string setting;
  double param = 1.0;
  std::size_t n = 200;
  bool multivariate = false;
};

struct RerunArgs {
  std::string path;
};

// Parses "1-20", "1,2,5" or a mix such as "1-3,8".
std::vector<std::size_t> parse_k_list(std::string_view spec) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    const auto item = spec.substr(start, end - start);
    const auto dash = item.find('-');
    std::size_t lo = 0, hi = 0;
    auto parse = [](std::string_view s, std::size_t& v) {
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc() && p == s.data() + s.size() && !s.empty();
    };
    const bool ok = dash == std::string_view::npos
                        ? parse(item, lo) && (hi = lo, true)
                        : parse(item.substr(0, dash), lo) && parse(item.substr(dash + 1), hi);
    if (!ok || lo < 1 || hi < lo) throw UsageError("bad k list '" + std::string(spec) + "'");
    for (std::size_t k = lo; k <= hi; ++k) out.push_back(k);
    start = end + 1;
  }
  return out;
}

std::vector<double> parse_param_list(std::string_view spec) {
  std::vector<double> out;
  std::istringstream items{std::string(spec)};
  std::string item;
  while (std::getline(items, item, ',')) {
    const auto dash = item.find('-', 1);
    try {
      if (dash != std::string::npos) {
        std::size_t used = 0;
        const long lo = std::stol(item.substr(0, dash), &used);
        if (used != dash) throw std::invalid_argument(item);
        const long hi = std::stol(item.substr(dash + 1), &used);
        if (used != item.size() - dash - 1 || hi < lo) throw std::invalid_argument(item);
        for (long v = lo; v <= hi; ++v) out.push_back(static_cast<double>(v));
      } else {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      }
    } catch (const std::logic_error&) {
      throw UsageError("bad parameter list '" + std::string(spec) + "'");
    }
  }
  if (out.empty()) throw UsageError("empty parameter list");
  return out;
}

std::vector<std::string> split_names(std::string_view spec) {
  std::vector<std::string> out;
  std::istringstream items{std::string(spec)};
  std::string item;
  while (std::getline(items, item, ',')) out.push_back(item);
  return out;
}

WeightMode parse_weights(const std::string& s) {
  return s == "unweighted" ? WeightMode::Unweighted : WeightMode::AutoSolve;
}

KnnMethod parse_knn(const std::string& s) {
  return s == "brute" ? KnnMethod::BruteForce : KnnMethod::KdTree;
}

std::vector<std::size_t> columns_or_usage(const CsvTable& table, std::string_view spec) {
  try {
    return select_columns(table, spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

json summary(const std::vector<double>& v) {
  if (v.empty()) return {{"min", nullptr}, {"max", nullptr}, {"mean", nullptr}};
  double sum = 0.0;
  for (double x : v) sum += x;
  return {{"min", *std::min_element(v.begin(), v.end())},
          {"max", *std::max_element(v.begin(), v.end())},
          {"mean", sum / static_cast<double>(v.size())}};
}

json outcome_json(const TestOutcome& out) {
  json j = {
      {"statistic", out.statistic},
      {"null_stats_summary", summary(out.null_stats)},
      {"p_value", out.p_value},
      {"critical_value", out.critical_value},
      {"reject", out.reject},
      {"seed", out.seed},
      {"k", out.k},
  };
  if (out.k_hat) j["k_hat"] = *out.k_hat;
  return j;
}

struct Result {
  std::string body;
  json parameters = json::object();
  std::map<std::string, std::string> inputs;  // path -> sha256
};

void hash_input(Result& result, const std::string& path) {
  try {
    result.inputs[path] = sha256_file(path);
  } catch (const std::exception&) {
    // unreadable files are reported by the CSV reader
  }
}

Result do_entropy(const EntropyArgs& a, std::uint64_t seed) {
  Result r;
  hash_input(r, a.input);
  const CsvTable table = read_csv(a.input);
  std::vector<std::size_t> cols;
  if (a.columns.empty()) {
    for (std::size_t j = 0; j < table.cols(); ++j) cols.push_back(j);
  } else {
    cols = columns_or_usage(table, a.columns);
  }
  PointSet points = extract(table, cols);
  if (a.jitter) points = jitter(points, seed);
  const std::size_t k = a.k.value_or(default_k(points.size()));
  const WeightVector w = make_weights(k, points.dim(), parse_weights(a.weights));
  const EntropyEstimate est = kl_entropy(points, k, w, parse_knn(a.knn));
  json weights = json::array();
  for (double x : est.weights.values()) weights.push_back(x);
  const json j = {{"value", est.value}, {"k", est.k}, {"n", est.n}, {"d", est.d}, {"weights", weights}};
  r.body = j.dump(2) + "\n";
  r.parameters = {{"input", a.input}, {"columns", cols}, {"k", k}, {"weights", a.weights},
                  {"knn", a.knn}, {"jitter", a.jitter}};
  return r;
}

Result do_test(const TestArgs& a, std::uint64_t seed, std::size_t threads) {
  Result r;
  const Variant variant = parse_variant(a.variant);
  if (variant == Variant::Known && a.marginal.empty() && a.marginal_file.empty()) {
    throw UsageError("variant known needs --marginal or --marginal-file");
  }
  hash_input(r, a.input);
  const CsvTable table = read_csv(a.input);

  std::vector<PointSet> blocks;
  json block_cols = json::array();
  if (!a.blocks.empty()) {
    if (variant != Variant::Multi) throw UsageError("--block is only for variant multi");
    for (const auto& spec : a.blocks) {
      const auto cols = columns_or_usage(table, spec);
      blocks.push_back(extract(table, cols));
      block_cols.push_back(cols);
    }
  } else {
    if (a.x_cols.empty() || a.y_cols.empty()) throw UsageError("--x-cols and --y-cols are required");
    for (const auto* spec : {&a.x_cols, &a.y_cols}) {
      const auto cols = columns_or_usage(table, *spec);
      blocks.push_back(extract(table, cols));
      block_cols.push_back(cols);
    }
  }
  if (blocks.size() < 2) throw UsageError("at least two blocks are needed");
  BlockedSample sample = BlockedSample::from_blocks(blocks);
  if (a.jitter) sample.points = jitter(sample.points, seed);

  TestConfig config;
  config.k_joint = a.k;
  const auto kx = a.k_x ? a.k_x : a.k;
  const auto ky = a.k_y ? a.k_y : a.k;
  if (kx || ky) {
    config.k_marginals = {kx.value_or(default_k(sample.size())), ky.value_or(default_k(sample.size()))};
  }
  config.weight_mode = parse_weights(a.weights);
  config.resamples = a.resamples;
  config.level = a.level;
  config.seed = seed;
  config.threads = threads;
  config.knn = parse_knn(a.knn);

  TestOutcome out;
  std::vector<std::size_t> grid;
  switch (variant) {
    case Variant::Known: {
      const std::size_t dy = sample.block_widths[1];
      MarginalSampler sampler = MarginalSampler::normal(0.0, 1.0, dy);
      if (!a.marginal_file.empty()) {
        hash_input(r, a.marginal_file);
        const CsvTable pool = read_csv(a.marginal_file);
        std::vector<std::size_t> all(pool.cols());
        for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
        sampler = MarginalSampler::empirical(extract(pool, all));
      } else {
        sampler = MarginalSampler::parse(a.marginal, dy);
      }
      out = mint_known(sample, sampler, config);
      break;
    }
    case Variant::Unknown: out = mint_unknown(sample, config); break;
    case Variant::Multi: out = mint_multi(sample, config); break;
    case Variant::Auto:
      grid = parse_k_list(a.k_grid);
      out = mint_auto(sample, grid, a.pairs, config);
      break;
    case Variant::Av:
      grid = parse_k_list(a.k_grid);
      out = mint_av(sample, grid, config);
      break;
  }
  json j = outcome_json(out);
  if (!grid.empty()) j["k_grid"] = grid;
  r.body = j.dump(2) + "\n";
  r.parameters = {{"variant", a.variant},     {"input", a.input},         {"blocks", block_cols},
                  {"k", a.k ? json(*a.k) : json(nullptr)},
                  {"k_marginals", config.k_marginals},
                  {"k_grid", grid},           {"pairs", a.pairs},         {"B", a.resamples},
                  {"q", a.level},             {"marginal", a.marginal},   {"marginal_file", a.marginal_file},
                  {"weights", a.weights},     {"knn", a.knn},             {"jitter", a.jitter}};
  return r;
}

Result do_regression(const RegressionArgs& a, std::uint64_t seed, std::size_t threads) {
  Result r;
  const bool partitioned = a.variant == "partitioned";
  if (partitioned && a.star.empty()) throw UsageError("variant partitioned needs --star");
  if (!partitioned && !a.star.empty()) throw UsageError("--star is only for variant partitioned");
  hash_input(r, a.input);
  const CsvTable table = read_csv(a.input);
  const auto response = columns_or_usage(table, a.response);
  if (response.size() != 1) throw UsageError("--response must name one column");
  const auto design = columns_or_usage(table, a.design);

  // Star columns first, the rest after, as the partitioned test expects.
  std::vector<std::size_t> order;
  std::size_t star_count = 0;
  if (partitioned) {
    const auto star = columns_or_usage(table, a.star);
    for (std::size_t c : star) {
      if (std::find(design.begin(), design.end(), c) == design.end()) {
        throw UsageError("--star columns must be among the --design columns");
      }
      order.push_back(c);
    }
    star_count = order.size();
  }
  for (std::size_t c : design) {
    if (std::find(order.begin(), order.end(), c) == order.end()) order.push_back(c);
  }

  RegressionProblem problem;
  const auto n = static_cast<Eigen::Index>(table.rows);
  problem.design.resize(n, static_cast<Eigen::Index>(order.size()));
  problem.response.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    problem.response(i) = table(static_cast<std::size_t>(i), response[0]);
    for (std::size_t j = 0; j < order.size(); ++j) {
      problem.design(i, static_cast<Eigen::Index>(j)) = table(static_cast<std::size_t>(i), order[j]);
    }
  }
  if (partitioned) problem.partition = ColumnPartition{star_count, order.size() - star_count};
  problem.noise = MarginalSampler::parse(a.noise, 1);

  TestConfig config;
  config.k_joint = a.k;
  config.k_marginals = {a.k_eta};
  config.resamples = a.resamples;
  config.level = a.level;
  config.seed = seed;
  config.threads = threads;
  config.knn = parse_knn(a.knn);

  OlsFit fit;
  TestOutcome out;
  if (a.variant == "split") {
    const Eigen::Index m = n / 2;
    fit = ols_fit(problem.design.bottomRows(n - m), problem.response.tail(n - m));
    out = mint_regression_split(problem, config);
  } else {
    fit = ols_fit(problem);
    out = partitioned ? mint_regression_partitioned(problem, config) : mint_regression(problem, config);
  }
  std::vector<double> beta(design.size());
  for (std::size_t j = 0; j < design.size(); ++j) {
    const auto pos = std::find(order.begin(), order.end(), design[j]) - order.begin();
    beta[j] = fit.beta_hat(pos);
  }
  json j = outcome_json(out);
  j["beta_hat"] = beta;
  j["sigma_hat"] = fit.sigma_hat;
  r.body = j.dump(2) + "\n";
  r.parameters = {{"variant", a.variant}, {"input", a.input}, {"response", response[0]},
                  {"design", design},     {"star_count", star_count},
                  {"k_eta", a.k_eta},     {"k", a.k},  {"B", a.resamples}, {"q", a.level},
                  {"noise", a.noise},     {"knn", a.knn}};
  return r;
}

Result do_power(const PowerArgs& a, std::uint64_t seed, std::size_t threads) {
  PowerConfig config;
  for (const auto& s : split_names(a.settings)) config.settings.push_back(parse_setting(s));
  if (config.settings.empty()) throw UsageError("--setting is required");
  config.parameters = parse_param_list(a.params);
  for (const auto& v : split_names(a.variants)) config.variants.push_back(parse_variant(v));
  config.k_grid = parse_k_list(a.k_grid);
  config.multivariate = a.multivariate;
  config.pairs = a.pairs;
  config.n = a.n;
  config.resamples = a.resamples;
  config.level = a.level;
  config.reps = a.reps;
  config.seed = seed;
  config.threads = threads;
  config.weight_mode = parse_weights(a.weights);
  std::ostringstream csv;
  write_power_csv(csv, run_power(config));
  Result r;
  r.body = csv.str();
  r.parameters = {{"settings", a.settings}, {"params", config.parameters}, {"variants", a.variants},
                  {"k_grid", config.k_grid}, {"pairs", a.pairs}, {"n", a.n}, {"B", a.resamples},
                  {"q", a.level}, {"reps", a.reps}, {"multivariate", a.multivariate},
                  {"weights", a.weights}};
  return r;
}

Result do_gen(const GenArgs& a, std::uint64_t seed) {
  ScenarioSpec spec{parse_setting(a.setting), a.param, a.n, a.multivariate, seed};
  const BlockedSample sample = generate(spec);
  std::vector<std::string> header;
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t j = 0; j < sample.block_widths[b]; ++j) {
      header.push_back((b == 0 ? "x" : "y") + std::to_string(j + 1));
    }
  }
  std::ostringstream csv;
  write_csv(csv, header, sample.points);
  Result r;
  r.body = csv.str();
  r.parameters = {{"setting", a.setting}, {"param", a.param}, {"n", a.n}, {"multivariate", a.multivariate}};
  return r;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw OutputError("cannot write " + path);
  f << body;
  f.close();
  if (!f) throw OutputError("cannot write " + path);
}

// Drops options that do not affect results, so the stored argv replays
// identically whatever thread count or manifest path the rerun uses.
std::vector<std::string> replayable(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--threads" || a == "--manifest") {
      ++i;
      continue;
    }
    if (a.starts_with("--threads=") || a.starts_with("--manifest=")) continue;
    out.push_back(a);
  }
  return out;
}

std::vector<std::string> with_output(std::vector<std::string> args, const std::string& output) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--output" || args[i] == "-o") {
      ++i;
      continue;
    }
    if (args[i].starts_with("--output=")) continue;
    out.push_back(args[i]);
  }
  out.push_back("--output");
  out.push_back(output);
  return out;
}

void add_common(CLI::App* cmd, Common& c, bool seeded = true) {
  if (seeded) cmd->add_option("--seed", c.seed, "64-bit seed; drawn from system entropy if absent");
  cmd->add_option("--threads", c.threads, "worker threads (overrides MINT_THREADS)")->check(CLI::PositiveNumber);
  cmd->add_option("-o,--output", c.output, "result file (default: standard output)");
  cmd->add_option("--manifest", c.manifest, "manifest file (default: <output>.manifest.json)");
}

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  CLI::App app{"Mutual information tests of independence and of linear model fit", "mint"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  Common common;

  EntropyArgs ea;
  auto* entropy = app.add_subcommand("entropy", "Weighted Kozachenko-Leonenko entropy estimate");
  entropy->add_option("-i,--input", ea.input, "CSV file")->required();
  entropy->add_option("--columns", ea.columns, "columns by name or 1-based index (default: all)");
  entropy->add_option("-k,--k", ea.k, "neighbour order")->check(CLI::PositiveNumber);
  entropy->add_option("--weights", ea.weights)->check(CLI::IsMember({"auto", "unweighted"}));
  entropy->add_option("--knn", ea.knn)->check(CLI::IsMember({"kdtree", "brute"}));
  entropy->add_flag("--jitter", ea.jitter, "perturb coordinates to break ties");
  add_common(entropy, common);

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Independence test");
  test->add_option("variant", ta.variant, "known | unknown | auto | av | multi")
      ->required()
      ->check(CLI::IsMember({"known", "unknown", "auto", "av", "multi"}));
  test->add_option("-i,--input", ta.input, "CSV file")->required();
  test->add_option("-x,--x-cols", ta.x_cols, "X columns");
  test->add_option("-y,--y-cols", ta.y_cols, "Y columns");
  test->add_option("--block", ta.blocks, "block columns, repeated (multi)");
  test->add_option("-k,--k", ta.k, "joint neighbour order")->check(CLI::PositiveNumber);
  test->add_option("--k-x", ta.k_x, "X marginal order")->check(CLI::PositiveNumber);
  test->add_option("--k-y", ta.k_y, "Y marginal order")->check(CLI::PositiveNumber);
  test->add_option("--k-grid", ta.k_grid, "orders for auto/av, e.g. 1-20")->capture_default_str();
  test->add_option("--pairs", ta.pairs, "permutation pairs for auto")->capture_default_str();
  test->add_option("-B,--resamples", ta.resamples)->capture_default_str()->check(CLI::PositiveNumber);
  test->add_option("-q,--level", ta.level)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  test->add_option("--marginal", ta.marginal, "known Y marginal, e.g. normal(0,1)");
  test->add_option("--marginal-file", ta.marginal_file, "CSV pool of draws from the Y marginal");
  test->add_option("--weights", ta.weights)->check(CLI::IsMember({"auto", "unweighted"}));
  test->add_option("--knn", ta.knn)->check(CLI::IsMember({"kdtree", "brute"}));
  test->add_flag("--jitter", ta.jitter, "perturb coordinates to break ties");
  add_common(test, common);

  RegressionArgs ra;
  auto* regression = app.add_subcommand("regression", "Goodness-of-fit test of a linear model");
  regression->add_option("-i,--input", ra.input, "CSV file")->required();
  regression->add_option("--response", ra.response, "response column")->required();
  regression->add_option("--design", ra.design, "design columns")->required();
  regression->add_option("--star", ra.star, "columns tested against the errors (partitioned)");
  regression->add_option("--variant", ra.variant)
      ->capture_default_str()
      ->check(CLI::IsMember({"full", "split", "partitioned"}));
  regression->add_option("--k-eta", ra.k_eta)->capture_default_str()->check(CLI::PositiveNumber);
  regression->add_option("-k,--k", ra.k)->capture_default_str()->check(CLI::PositiveNumber);
  regression->add_option("-B,--resamples", ra.resamples)->capture_default_str()->check(CLI::PositiveNumber);
  regression->add_option("-q,--level", ra.level)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  regression->add_option("--noise", ra.noise, "error distribution")->capture_default_str();
  regression->add_option("--knn", ra.knn)->check(CLI::IsMember({"kdtree", "brute"}));
  add_common(regression, common);

  PowerArgs pa;
  auto* power = app.add_subcommand("power", "Monte Carlo rejection rates over a scenario grid");
  power->add_option("--setting", pa.settings, "comma-separated settings")->required();
  power->add_option("--params", pa.params, "parameter list, e.g. 1-6 or 0,0.5,1")->capture_default_str();
  power->add_option("--variants", pa.variants, "comma-separated test variants")->capture_default_str();
  power->add_option("--k-grid", pa.k_grid)->capture_default_str();
  power->add_option("--pairs", pa.pairs)->capture_default_str();
  power->add_option("-n", pa.n)->capture_default_str()->check(CLI::PositiveNumber);
  power->add_option("-B,--resamples", pa.resamples)->capture_default_str()->check(CLI::PositiveNumber);
  power->add_option("-q,--level", pa.level)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  power->add_option("--reps", pa.reps)->capture_default_str()->check(CLI::PositiveNumber);
  power->add_option("--weights", pa.weights)->check(CLI::IsMember({"auto", "unweighted"}));
  power->add_flag("--multivariate", pa.multivariate);
  add_common(power, common);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Write a simulated sample as CSV");
  gen->add_option("--setting", ga.setting)
      ->required()
      ->check(CLI::IsMember({"sinusoidal", "circular", "multiplicative", "gaussian-null", "gaussian-corr"}));
  gen->add_option("--param", ga.param, "l or rho")->capture_default_str();
  gen->add_option("-n", ga.n)->capture_default_str();
  gen->add_flag("--multivariate", ga.multivariate);
  add_common(gen, common);

  RerunArgs rr;
  auto* rerun = app.add_subcommand("rerun", "Replay a run from its manifest");
  rerun->add_option("file", rr.path, "manifest of the run to replay")->required();
  add_common(rerun, common, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageFailure;
  }

  const std::size_t threads = common.threads.value_or(default_thread_count());

  if (rerun->parsed()) {
    if (depth > 0) throw UsageError("a manifest cannot replay another rerun");
    const RunManifest m = read_manifest(rr.path);
    // Paths given to the rerun itself are relative to the caller's directory.
    if (!common.output.empty()) common.output = std::filesystem::absolute(common.output).string();
    if (!common.manifest.empty()) common.manifest = std::filesystem::absolute(common.manifest).string();
    if (!m.working_directory.empty()) std::filesystem::current_path(m.working_directory);
    for (const auto& [path, digest] : m.input_sha256) {
      if (sha256_file(path) != digest) throw UsageError("input " + path + " changed since the recorded run");
    }
    std::vector<std::string> replay = m.argv;
    if (!common.output.empty()) replay = with_output(replay, common.output);
    if (common.threads) {
      replay.push_back("--threads");
      replay.push_back(std::to_string(*common.threads));
    }
    if (!common.manifest.empty()) {
      replay.push_back("--manifest");
      replay.push_back(common.manifest);
    }
    return run_impl(replay, out, err, depth + 1);
  }

  const bool seeded = !common.seed.has_value();
  const std::uint64_t seed = common.seed.value_or(system_seed());
  std::vector<std::string> resolved = replayable(args);
  if (seeded) {
    resolved.push_back("--seed");
    resolved.push_back(std::to_string(seed));
  }

  const auto start = std::chrono::steady_clock::now();
  Result result;
  std::string command;
  if (entropy->parsed()) {
    command = "entropy";
    result = do_entropy(ea, seed);
  } else if (test->parsed()) {
    command = "test";
    result = do_test(ta, seed, threads);
  } else if (regression->parsed()) {
    command = "regression";
    result = do_regression(ra, seed, threads);
  } else if (power->parsed()) {
    command = "power";
    result = do_power(pa, seed, threads);
  } else {
    command = "gen";
    result = do_gen(ga, seed);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (common.output.empty()) {
    out << result.body;
  } else {
    write_file(common.output, result.body);
  }

  RunManifest m;
  m.command = command;
  m.argv = resolved;
  m.working_directory = std::filesystem::current_path().string();
  m.parameters = result.parameters;
  m.parameters["threads"] = threads;
  m.seed = seed;
  m.version = tool_version();
  m.input_sha256 = result.inputs;
  m.duration_seconds = seconds;
  const std::string text = to_json(m).dump(2) + "\n";
  if (!common.manifest.empty()) {
    write_file(common.manifest, text);
  } else if (!common.output.empty()) {
    write_file(common.output + ".manifest.json", text);
  } else {
    err << text;
  }
  return kSuccess;
}

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  try {
    return execute(args, out, err, depth);
  } catch (const ParseError& e) {
    err << "mint: parse error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const OutputError& e) {
    err << "mint: " << e.what() << '\n';
    return kParseFailure;
  } catch (const UsageError& e) {
    err << "mint: " << e.what() << '\n';
    return kUsageFailure;
  } catch (const Error& e) {
    err << "mint: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "mint: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run_impl(args, out, err, 0);
}

}  // namespace mint::cli
