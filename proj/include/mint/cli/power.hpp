#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mint/datagen.hpp"
#include "mint/entropy.hpp"

namespace mint::cli {

enum class Variant { Known, Unknown, Auto, Av, Multi };

std::string to_string(Variant variant);
Variant parse_variant(std::string_view name);

struct PowerConfig {
  std::vector<Setting> settings;
  /// Swept for every setting except gaussian-null, which gets one row.
  std::vector<double> parameters;
  bool multivariate = false;
  std::vector<Variant> variants;
  /// known/unknown/multi emit one row per k; auto/av use the grid as a whole.
  std::vector<std::size_t> k_grid;
  std::size_t pairs = 100;
  std::size_t n = 200;
  std::size_t resamples = 99;
  double level = 0.05;
  std::size_t reps = 100;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  WeightMode weight_mode = WeightMode::AutoSolve;
};

struct PowerRow {
  std::string setting;
  double parameter = 0.0;
  std::string variant;
  std::string k;
  std::size_t n = 0;
  std::size_t resamples = 0;
  double level = 0.0;
  std::size_t reps = 0;
  double rejection_rate = 0.0;
  double std_error = 0.0;
  std::string status = "ok";
};

/// Repetitions run in parallel, each single-threaded. Repetition r of a
/// (setting, parameter) cell uses the same data and test seed for every
/// variant and k, so rows are comparable draw for draw.
std::vector<PowerRow> run_power(const PowerConfig& config);

void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows);

}  // namespace mint::cli
