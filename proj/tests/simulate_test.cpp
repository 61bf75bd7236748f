#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "fdhom/simulate.hpp"

using Catch::Approx;
using namespace fdhom;

TEST_CASE("ScenarioConfig validation") {
  ScenarioConfig config;
  REQUIRE_NOTHROW(config.validate());
  config.a1 = 0.0;
  REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  config.a1 = 1.0;
  config.r = 1.5;
  REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  config.r = -0.1;
  REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  config.r = 0.5;
  config.n = 1;
  REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  config.n = 20;
  config.runs = 0;
  REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  config.runs = 10;
  config.alphas = {0.0};
  REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  config.alphas = {};
  REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("bridge pairs are pinned at the endpoints") {
  const Grid grid(101);
  RngStream rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [b1, b2] = simulate_bridge_pair(0.3, grid, rng);
    REQUIRE(b1.front() == 0.0);
    REQUIRE(b1.back() == 0.0);
    REQUIRE(b2.front() == 0.0);
    REQUIRE(b2.back() == 0.0);
  }
  REQUIRE_THROWS_AS(simulate_bridge_pair(1.1, grid, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(simulate_bridge_pair(-0.2, grid, rng), std::invalid_argument);
}

TEST_CASE("full dependency copies the first bridge") {
  const Grid grid(51);
  RngStream rng(9);
  const auto [b1, b2] = simulate_bridge_pair(1.0, grid, rng);
  REQUIRE(b1 == b2);
}

TEST_CASE("bridge moments match the target covariance structure") {
  const Grid grid(21);  // t = 0.25, 0.5, 0.75 are grid points 5, 10, 15
  const int draws = 100000;

  double sum_cross_half = 0.0;       // B1(0.5) * B2(0.5) at r = 0.5
  double sum_cross_zero = 0.0;       // same at r = 0
  std::vector<double> sum_sq(3, 0.0);  // B1(t)^2 at t = 0.25, 0.5, 0.75

  RngStream rng_half(2026);
  RngStream rng_zero(2027);
  for (int i = 0; i < draws; ++i) {
    const auto [b1, b2] = simulate_bridge_pair(0.5, grid, rng_half);
    sum_cross_half += b1[10] * b2[10];
    sum_sq[0] += b1[5] * b1[5];
    sum_sq[1] += b1[10] * b1[10];
    sum_sq[2] += b1[15] * b1[15];

    const auto [c1, c2] = simulate_bridge_pair(0.0, grid, rng_zero);
    sum_cross_zero += c1[10] * c2[10];
  }

  // Cov(B1(s), B2(t)) = r (min(s,t) - st): r/4 at s = t = 1/2.
  REQUIRE(sum_cross_half / draws == Approx(0.125).margin(0.005));
  // Independence at r = 0: correlation of variance-1/4 variables within 0.01
  // means covariance within 0.0025.
  REQUIRE(sum_cross_zero / draws == Approx(0.0).margin(0.0025));

  // Var B(t) = t(1-t), checked within 3 Monte Carlo standard errors
  // (chi-square theory: SE of the mean of B^2 is sqrt(2/N) t(1-t)).
  const std::vector<double> times = {0.25, 0.5, 0.75};
  for (std::size_t idx = 0; idx < times.size(); ++idx) {
    const double expected = times[idx] * (1.0 - times[idx]);
    const double tolerance = 3.0 * std::sqrt(2.0 / draws) * expected;
    REQUIRE(sum_sq[idx] / draws == Approx(expected).margin(tolerance));
  }
}

TEST_CASE("generate_sample applies scale and drift") {
  // With r = 1 and equal scales the bridges cancel in the difference, leaving
  // the drift gap exactly.
  ScenarioConfig config;
  config.a1 = 1.0;
  config.a2 = 1.0;
  config.b1 = 0.0;
  config.b2 = 5.0;
  config.r = 1.0;
  config.n = 4;
  config.grid_points = 41;

  RngStream rng(33);
  const PairedSample sample = generate_sample(config, rng);
  REQUIRE(sample.size() == 4);
  REQUIRE(sample.grid().point_count == 41);
  for (int j = 0; j < sample.size(); ++j) {
    for (int k = 0; k < 41; ++k) {
      const double t = sample.grid().point(k);
      const double gap = sample.curve(j, 1).values[static_cast<std::size_t>(k)] -
                         sample.curve(j, 0).values[static_cast<std::size_t>(k)];
      REQUIRE(gap == Approx(5.0 * t * (1.0 - t)).margin(1e-12));
    }
  }
}

TEST_CASE("drift shifts the curve mean at the midpoint") {
  ScenarioConfig config;
  config.b1 = 1.0;
  config.b2 = 1.0;
  config.r = 0.25;
  config.n = 2;
  config.grid_points = 21;

  RngStream rng(77);
  double sum = 0.0;
  int count = 0;
  for (int rep = 0; rep < 25000; ++rep) {
    const PairedSample sample = generate_sample(config, rng);
    for (int j = 0; j < sample.size(); ++j) {
      sum += sample.curve(j, 0).values[10];
      sum += sample.curve(j, 1).values[10];
      count += 2;
    }
  }
  // E X(0.5) = 0 + b * 0.5 * 0.5.
  REQUIRE(sum / count == Approx(0.25).margin(0.01));
}

TEST_CASE("rejection rate report has the documented shape") {
  ScenarioConfig config;
  config.r = 0.25;
  config.n = 8;
  config.grid_points = 21;
  config.alphas = {0.05, 0.2};
  config.runs = 40;
  config.resampling.replicates = 49;
  config.resampling.direction_count = 20;
  config.resampling.seed = 99;

  const std::vector<RateRow> rows = empirical_rejection_rate(config);
  REQUIRE(rows.size() == 4);
  REQUIRE(rows[0].method == "bootstrap");
  REQUIRE(rows[1].method == "permutation");
  REQUIRE(rows[0].alpha == 0.05);
  REQUIRE(rows[2].alpha == 0.2);
  for (const RateRow& row : rows) {
    REQUIRE(row.runs == 40);
    REQUIRE(row.rate >= 0.0);
    REQUIRE(row.rate <= 1.0);
    REQUIRE(row.std_error == Approx(std::sqrt(row.rate * (1.0 - row.rate) / 40.0)).margin(1e-15));
  }

  // Scheduling invariance: worker count must not change any reported number.
  ScenarioConfig threaded = config;
  threaded.resampling.threads = 3;
  const std::vector<RateRow> rows_threaded = empirical_rejection_rate(threaded);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].rate == rows_threaded[i].rate);
    REQUIRE(rows[i].std_error == rows_threaded[i].std_error);
  }
}

TEST_CASE("degenerate identical-component scenario never rejects") {
  ScenarioConfig config;
  config.a1 = 2.0;
  config.a2 = 2.0;
  config.b1 = 0.7;
  config.b2 = 0.7;
  config.r = 1.0;  // X_{j,1} = X_{j,2} exactly
  config.n = 6;
  config.grid_points = 21;
  config.runs = 10;
  config.resampling.replicates = 49;
  config.resampling.direction_count = 10;
  config.resampling.seed = 4;

  for (const RateRow& row : empirical_rejection_rate(config)) {
    REQUIRE(row.rate == 0.0);
  }
}

TEST_CASE("permutation test is calibrated under exchangeability") {
  // Exchangeable null (equal marginals, symmetric dependence): the
  // permutation test is finite-sample exact, so its rejection rate over 2000
  // datasets at alpha = 0.05 stays within 0.05 +/- 0.015.
  ScenarioConfig config;
  config.r = 0.5;
  config.n = 10;
  config.grid_points = 21;
  config.alphas = {0.05};
  config.runs = 2000;
  config.resampling.replicates = 99;
  config.resampling.direction_count = 50;
  config.resampling.seed = 314159;

  const std::vector<RateRow> rows = empirical_rejection_rate(config);
  REQUIRE(rows[1].method == "permutation");
  REQUIRE(rows[1].rate >= 0.035);
  REQUIRE(rows[1].rate <= 0.065);
  // The bootstrap is asymptotically exact but conservative under strong
  // dependence; only bound it from above here.
  REQUIRE(rows[0].rate <= 0.075);
}

TEST_CASE("null rejection rates stay near level across the size study grid") {
  // All-null sweep: scale-only and drift-only families crossed with the three
  // dependency levels. The permutation rate must never exceed
  // alpha + 3 sqrt(alpha (1 - alpha) / runs).
  const int runs = 150;
  const double alpha = 0.05;
  const double bound = alpha + 3.0 * std::sqrt(alpha * (1.0 - alpha) / runs);

  std::vector<std::pair<double, double>> families;  // (a, b) with a1 = a2, b1 = b2
  for (double a : {1.0, 1.5, 2.0, 2.5}) families.emplace_back(a, 0.0);
  for (double b : {0.5, 1.0, 1.5, 2.0}) families.emplace_back(1.0, b);

  std::uint64_t scenario_index = 0;
  for (const auto& [a, b] : families) {
    for (double r : {0.0, 0.25, 0.5}) {
      ScenarioConfig config;
      config.a1 = a;
      config.a2 = a;
      config.b1 = b;
      config.b2 = b;
      config.r = r;
      config.n = 20;
      config.grid_points = 51;
      config.alphas = {alpha};
      config.runs = runs;
      config.resampling.replicates = 99;
      config.resampling.direction_count = 100;
      config.resampling.seed = derive_seed(97531, stream_tag::scenario, scenario_index++);

      const std::vector<RateRow> rows = empirical_rejection_rate(config);
      INFO("a=" << a << " b=" << b << " r=" << r);
      REQUIRE(rows[1].method == "permutation");
      REQUIRE(rows[1].rate <= bound);
    }
  }
}

TEST_CASE("scenario files parse with line-addressed errors") {
  ScenarioConfig base;
  base.grid_points = 31;
  base.resampling.replicates = 19;

  std::istringstream good(
      "# scale pair, then drift pair\n"
      "\n"
      "1 1 0 0 0.5 20 0.05 100\n"
      "1.5 2.5 0 1 0 12 0.1 50\n");
  const std::vector<ScenarioConfig> scenarios = load_scenarios(good, base);
  REQUIRE(scenarios.size() == 2);
  REQUIRE(scenarios[0].a1 == 1.0);
  REQUIRE(scenarios[0].r == 0.5);
  REQUIRE(scenarios[0].n == 20);
  REQUIRE(scenarios[0].alphas == std::vector<double>{0.05});
  REQUIRE(scenarios[0].runs == 100);
  REQUIRE(scenarios[0].grid_points == 31);               // inherited from base
  REQUIRE(scenarios[0].resampling.replicates == 19);     // inherited from base
  REQUIRE(scenarios[1].a2 == 2.5);
  REQUIRE(scenarios[1].b2 == 1.0);
  REQUIRE(scenarios[1].runs == 50);

  std::istringstream short_line("1 1 0 0 0.5 20 0.05\n");
  REQUIRE_THROWS_WITH(load_scenarios(short_line, base),
                      Catch::Matchers::ContainsSubstring("line 1"));

  std::istringstream bad_number("# header\n1 1 0 0 x 20 0.05 100\n");
  REQUIRE_THROWS_WITH(load_scenarios(bad_number, base),
                      Catch::Matchers::ContainsSubstring("line 2"));

  std::istringstream bad_value("1 1 0 0 1.5 20 0.05 100\n");
  REQUIRE_THROWS_WITH(load_scenarios(bad_value, base),
                      Catch::Matchers::ContainsSubstring("[0,1]"));

  std::istringstream empty("# nothing here\n\n");
  REQUIRE_THROWS_AS(load_scenarios(empty, base), std::invalid_argument);
}

TEST_CASE("report rows serialize as stable CSV") {
  std::ostringstream out;
  write_report_header(out);
  RateRow row;
  row.method = "bootstrap";
  row.alpha = 0.05;
  row.rate = 0.125;
  row.std_error = 0.25;
  row.runs = 100;
  write_report_row(out, 3, row);
  REQUIRE(out.str() == "scenario_id,method,alpha,rate,stderr,runs\n3,bootstrap,0.05,0.125,0.25,100\n");
}
