#include "mint/cli/power.hpp"

#include <cmath>
#include <optional>
#include <ostream>

#include "mint/cli/csv.hpp"
#include "mint/error.hpp"
#include "mint/independence.hpp"
#include "mint/parallel.hpp"
#include "mint/rng.hpp"

namespace mint::cli {

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::Known: return "known";
    case Variant::Unknown: return "unknown";
    case Variant::Auto: return "auto";
    case Variant::Av: return "av";
    case Variant::Multi: return "multi";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::Known, Variant::Unknown, Variant::Auto, Variant::Av, Variant::Multi}) {
    if (name == to_string(v)) return v;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown test variant '" + std::string(name) + "'");
}

namespace {

std::string grid_label(const std::vector<std::size_t>& grid) {
  bool contiguous = true;
  for (std::size_t i = 1; i < grid.size(); ++i) contiguous &= grid[i] == grid[i - 1] + 1;
  if (contiguous && grid.size() > 2) {
    return std::to_string(grid.front()) + "-" + std::to_string(grid.back());
  }
  std::string s;
  for (std::size_t i = 0; i < grid.size(); ++i) s += (i ? ";" : "") + std::to_string(grid[i]);
  return s;
}

struct Slot {
  Variant variant;
  std::optional<std::size_t> k;  // empty for grid variants
};

struct Cell {
  ScenarioSpec spec;
  std::size_t index = 0;
};

}  // namespace

std::vector<PowerRow> run_power(const PowerConfig& config) {
  if (config.reps == 0) throw Error(ErrorKind::InvalidArgument, "reps must be positive");
  if (config.k_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty k grid");

  std::vector<Cell> cells;
  for (Setting setting : config.settings) {
    const std::vector<double> params =
        setting == Setting::GaussianNull ? std::vector<double>{0.0} : config.parameters;
    for (double parameter : params) {
      Cell cell;
      cell.spec = {setting, parameter, config.n, config.multivariate, 0};
      cell.index = cells.size();
      cells.push_back(cell);
    }
  }

  std::vector<Slot> slots;
  for (Variant v : config.variants) {
    if (v == Variant::Auto || v == Variant::Av) {
      slots.push_back({v, std::nullopt});
    } else {
      for (std::size_t k : config.k_grid) slots.push_back({v, k});
    }
  }

  std::vector<PowerRow> rows;
  for (const Cell& cell : cells) {
    // outcome[slot][rep]: 1 reject, 0 accept, -1 error
    std::vector<std::vector<int>> outcome(slots.size(), std::vector<int>(config.reps, 0));
    std::vector<std::vector<std::string>> errors(slots.size(), std::vector<std::string>(config.reps));

    parallel_for(config.reps, config.threads, [&](std::size_t r) {
      Rng seeds = Rng::stream(config.seed, StreamDomain::Replicate, cell.index, r);
      ScenarioSpec spec = cell.spec;
      spec.seed = seeds();
      const std::uint64_t test_seed = seeds();

      std::optional<BlockedSample> sample;
      std::string data_error;
      try {
        sample = generate(spec);
      } catch (const std::exception& e) {
        data_error = e.what();
      }

      TestConfig base;
      base.resamples = config.resamples;
      base.level = config.level;
      base.seed = test_seed;
      base.threads = 1;
      base.weight_mode = config.weight_mode;

      std::size_t s = 0;
      while (s < slots.size()) {
        const Variant v = slots[s].variant;
        std::size_t span = 1;
        if (slots[s].k) {
          while (s + span < slots.size() && slots[s + span].variant == v) ++span;
        }
        try {
          if (!sample) throw std::runtime_error(data_error);
          if (v == Variant::Unknown) {
            const auto grid = std::vector<std::size_t>(config.k_grid.begin(), config.k_grid.end());
            auto all = mint_unknown_grid(*sample, grid, base);
            for (std::size_t i = 0; i < span; ++i) outcome[s + i][r] = all[i].reject;
          } else if (v == Variant::Known || v == Variant::Multi) {
            const MarginalSampler y = y_marginal(spec);
            for (std::size_t i = 0; i < span; ++i) {
              TestConfig c = base;
              c.k_joint = *slots[s + i].k;
              c.k_marginals = {*slots[s + i].k, *slots[s + i].k};
              try {
                const TestOutcome out = v == Variant::Known ? mint_known(*sample, y, c) : mint_multi(*sample, c);
                outcome[s + i][r] = out.reject;
              } catch (const std::exception& e) {
                outcome[s + i][r] = -1;
                errors[s + i][r] = e.what();
              }
            }
          } else if (v == Variant::Auto) {
            outcome[s][r] = mint_auto(*sample, config.k_grid, config.pairs, base).reject;
          } else {
            outcome[s][r] = mint_av(*sample, config.k_grid, base).reject;
          }
        } catch (const std::exception& e) {
          for (std::size_t i = 0; i < span; ++i) {
            outcome[s + i][r] = -1;
            errors[s + i][r] = e.what();
          }
        }
        s += span;
      }
    });

    for (std::size_t s = 0; s < slots.size(); ++s) {
      PowerRow row;
      row.setting = mint::to_string(cell.spec.setting) + (config.multivariate ? "-multivariate" : "");
      row.parameter = cell.spec.parameter;
      row.variant = to_string(slots[s].variant);
      row.k = slots[s].k ? std::to_string(*slots[s].k) : grid_label(config.k_grid);
      row.n = config.n;
      row.resamples = config.resamples;
      row.level = config.level;
      row.reps = config.reps;
      std::size_t rejections = 0;
      for (std::size_t r = 0; r < config.reps; ++r) {
        if (outcome[s][r] < 0) {
          row.status = "error: " + errors[s][r];
          break;
        }
        rejections += static_cast<std::size_t>(outcome[s][r]);
      }
      if (row.status == "ok") {
        const double p = static_cast<double>(rejections) / static_cast<double>(config.reps);
        row.rejection_rate = p;
        row.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(config.reps));
      }
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows) {
  out << "setting,parameter,variant,k,n,B,q,num_reps,rejection_rate,std_error,status\n";
  for (const PowerRow& row : rows) {
    const bool ok = row.status == "ok";
    out << row.setting << ',' << format_shortest(row.parameter) << ',' << row.variant << ','
        << row.k << ',' << row.n << ',' << row.resamples << ',' << format_shortest(row.level) << ','
        << row.reps << ',' << (ok ? format_shortest(row.rejection_rate) : "") << ','
        << (ok ? format_shortest(row.std_error) : "") << ',' << csv_field(row.status) << '\n';
  }
}

}  // namespace mint::cli
