#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fdhom/hilbert.hpp"
#include "fdhom/numeric_io.hpp"
#include "fdhom/parallel.hpp"
#include "fdhom/resampling.hpp"
#include "fdhom/rng.hpp"

namespace fdhom {

// One Monte Carlo study cell: X_i(t) = a_i B_i(t) + b_i t(1-t) where
// (B_1, B_2) are standard Brownian bridges with correlation r.
struct ScenarioConfig {
  double a1 = 1.0;
  double a2 = 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double r = 0.0;
  int n = 20;
  int grid_points = 101;
  std::vector<double> alphas = {0.05};
  int runs = 1000;
  ResamplingConfig resampling;  // resampling.seed is the master seed of the study

  void validate() const {
    if (a1 == 0.0 || a2 == 0.0) {
      throw std::invalid_argument("ScenarioConfig: scale factors must be nonzero");
    }
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("ScenarioConfig: correlation must lie in [0,1]");
    }
    if (n < 2) throw std::invalid_argument("ScenarioConfig: n must be >= 2");
    if (grid_points < 2) throw std::invalid_argument("ScenarioConfig: grid_points must be >= 2");
    if (runs < 1) throw std::invalid_argument("ScenarioConfig: runs must be >= 1");
    if (alphas.empty()) throw std::invalid_argument("ScenarioConfig: at least one alpha level");
    for (double alpha : alphas) {
      if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("ScenarioConfig: alpha must lie in (0,1)");
      }
    }
    resampling.validate();
  }
};

// Two standard Brownian bridges with Cov(B1(s), B2(t)) = r (min(s,t) - st),
// discretized on the grid via B(t_k) = W(t_k) - t_k W(1). Both paths are
// exactly zero at the endpoints. Consumes 2 (grid points - 1) normals, first
// the increments of W1, then those of the independent driver of B2.
inline std::pair<std::vector<double>, std::vector<double>> simulate_bridge_pair(
    double r, const Grid& grid, RngStream& rng) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::invalid_argument("simulate_bridge_pair: correlation must lie in [0,1]");
  }
  const std::size_t points = static_cast<std::size_t>(grid.point_count);
  const double sqrt_dt = std::sqrt(grid.spacing());

  const auto one_bridge = [&](std::vector<double>& bridge) {
    bridge.assign(points, 0.0);
    double walk = 0.0;
    for (std::size_t k = 1; k < points; ++k) {
      walk += sqrt_dt * rng.normal();
      bridge[k] = walk;
    }
    const double terminal = bridge[points - 1];
    for (std::size_t k = 1; k + 1 < points; ++k) {
      bridge[k] -= grid.point(static_cast<int>(k)) * terminal;
    }
    bridge[points - 1] = 0.0;
  };

  std::vector<double> first;
  std::vector<double> second;
  one_bridge(first);
  one_bridge(second);
  const double tail = std::sqrt(1.0 - r * r);
  for (std::size_t k = 0; k < points; ++k) {
    second[k] = r * first[k] + tail * second[k];
  }
  return {std::move(first), std::move(second)};
}

// One paired sample of n curves per component under the scenario.
inline PairedSample generate_sample(const ScenarioConfig& config, RngStream& rng) {
  config.validate();
  const Grid grid(config.grid_points);
  const std::size_t points = static_cast<std::size_t>(config.grid_points);

  std::vector<std::pair<FunctionSample, FunctionSample>> pairs;
  pairs.reserve(static_cast<std::size_t>(config.n));
  for (int j = 0; j < config.n; ++j) {
    auto [bridge1, bridge2] = simulate_bridge_pair(config.r, grid, rng);
    std::vector<double> x1(points);
    std::vector<double> x2(points);
    for (std::size_t k = 0; k < points; ++k) {
      const double t = grid.point(static_cast<int>(k));
      const double hump = t * (1.0 - t);
      x1[k] = config.a1 * bridge1[k] + config.b1 * hump;
      x2[k] = config.a2 * bridge2[k] + config.b2 * hump;
    }
    pairs.emplace_back(FunctionSample(grid, std::move(x1)), FunctionSample(grid, std::move(x2)));
  }
  return PairedSample(std::move(pairs));
}

struct RateRow {
  std::string method;  // "bootstrap" or "permutation"
  double alpha = 0.0;
  double rate = 0.0;
  double std_error = 0.0;
  int runs = 0;
};

// Fraction of independent runs whose p-value is <= alpha, with the binomial
// standard error sqrt(rate (1 - rate) / runs). Run i draws its data on
// substream (study_data, i) and tests with seed (study_test, i), so results
// do not depend on the thread count and distinct runs never share a stream.
inline std::vector<RateRow> empirical_rejection_rate(const ScenarioConfig& config) {
  config.validate();
  const RngStream root(config.resampling.seed);
  const std::size_t runs = static_cast<std::size_t>(config.runs);

  std::vector<double> p_boot(runs);
  std::vector<double> p_perm(runs);
  parallel_for(runs, config.resampling.threads, [&](std::size_t i) {
    RngStream data_rng = root.substream(stream_tag::study_data, i);
    const PairedSample sample = generate_sample(config, data_rng);

    ResamplingConfig test_config = config.resampling;
    test_config.seed = derive_seed(config.resampling.seed, stream_tag::study_test, i);
    test_config.threads = 1;
    const TestResult result = run_test(sample, test_config);
    p_boot[i] = result.p_boot;
    p_perm[i] = result.p_perm;
  });

  const auto summarize = [&](const std::string& method, const std::vector<double>& p_values,
                             double alpha) {
    std::size_t hits = 0;
    for (double p : p_values) {
      if (p <= alpha) ++hits;
    }
    const double rate = static_cast<double>(hits) / static_cast<double>(runs);
    RateRow row;
    row.method = method;
    row.alpha = alpha;
    row.rate = rate;
    row.std_error = std::sqrt(rate * (1.0 - rate) / static_cast<double>(runs));
    row.runs = config.runs;
    return row;
  };

  std::vector<RateRow> rows;
  rows.reserve(2 * config.alphas.size());
  for (double alpha : config.alphas) {
    rows.push_back(summarize("bootstrap", p_boot, alpha));
    rows.push_back(summarize("permutation", p_perm, alpha));
  }
  return rows;
}

// Scenario batch file: one scenario per line as
//   a1 a2 b1 b2 r n alpha runs
// separated by whitespace. Blank lines and lines starting with '#' are
// skipped. Everything not on the line is taken from `base`.
inline std::vector<ScenarioConfig> load_scenarios(std::istream& in, const ScenarioConfig& base) {
  std::vector<ScenarioConfig> scenarios;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::vector<std::string> fields;
    std::istringstream splitter(line);
    std::string token;
    while (splitter >> token) fields.push_back(token);
    if (fields.empty() || fields.front().front() == '#') continue;

    const std::string where = "scenario file line " + std::to_string(line_number);
    if (fields.size() != 8) {
      throw std::invalid_argument(where + ": expected 8 fields (a1 a2 b1 b2 r n alpha runs), got " +
                                  std::to_string(fields.size()));
    }
    ScenarioConfig scenario = base;
    scenario.a1 = detail::parse_double(fields[0], where + ", field a1");
    scenario.a2 = detail::parse_double(fields[1], where + ", field a2");
    scenario.b1 = detail::parse_double(fields[2], where + ", field b1");
    scenario.b2 = detail::parse_double(fields[3], where + ", field b2");
    scenario.r = detail::parse_double(fields[4], where + ", field r");
    scenario.n = static_cast<int>(detail::parse_int(fields[5], where + ", field n"));
    scenario.alphas = {detail::parse_double(fields[6], where + ", field alpha")};
    scenario.runs = static_cast<int>(detail::parse_int(fields[7], where + ", field runs"));
    try {
      scenario.validate();
    } catch (const std::exception& error) {
      throw std::invalid_argument(where + ": " + error.what());
    }
    scenarios.push_back(std::move(scenario));
  }
  if (scenarios.empty()) {
    throw std::invalid_argument("scenario file contains no scenarios");
  }
  return scenarios;
}

inline void write_report_header(std::ostream& out) {
  out << "scenario_id,method,alpha,rate,stderr,runs\n";
}

inline void write_report_row(std::ostream& out, int scenario_id, const RateRow& row) {
  out << scenario_id << ',' << row.method << ',' << detail::format_double(row.alpha) << ','
      << detail::format_double(row.rate) << ',' << detail::format_double(row.std_error) << ','
      << row.runs << '\n';
}

}  // namespace fdhom
