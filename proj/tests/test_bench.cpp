// Copyright 2026 The mtspec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mtspec/bench.hpp"
#include "mtspec/circulant.hpp"
#include "mtspec/csv.hpp"
#include "mtspec/rng.hpp"
#include "mtspec/tapers.hpp"

using namespace mtspec;

TEST_CASE("fit_rate_slope on synthetic laws") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {10.0, 20.0, 40.0, 80.0}) pts.emplace_back(x, std::pow(x, -0.8));
  const auto fit = fit_rate_slope(pts);
  CHECK(fit.slope == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(fit.half_width <= 1e-12);

  // Rate-form fit: y = u^{4/5} against u = log(x)/x.
  std::vector<std::pair<double, double>> rate_pts;
  for (double x : {128.0, 256.0, 512.0, 1024.0}) {
    const double u = std::log(x) / x;
    rate_pts.emplace_back(u, std::pow(u, 0.8));
  }
  CHECK(fit_rate_slope(rate_pts).slope == doctest::Approx(0.8).epsilon(1e-12));

  CHECK_THROWS_AS(fit_rate_slope({{1.0, 1.0}, {2.0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_rate_slope({{1.0, 1.0}, {2.0, -0.5}, {3.0, 0.2}}),
                  std::invalid_argument);
}

TEST_CASE("mse experiment on white noise") {
  RiskExperimentConfig config{make_interval(64), SpectralDensity::constant(0.5), 8, 4, 2000,
                              2024, 2};
  PointStats stats;
  const auto rep = run_mse_experiment(config, &stats);
  CHECK(rep.replicates == 2000);
  CHECK(rep.mse > 0.0);
  CHECK(rep.mse_se > 0.0);
  CHECK(std::isfinite(rep.mse_bound_value));
  CHECK(rep.density_c2 == doctest::Approx(0.5));
  CHECK_FALSE(rep.c2_warning);

  // Unbiasedness: every grid point within 4 MC standard errors of 0.5.
  REQUIRE(stats.mean.size() == static_cast<std::size_t>(4 * 63));
  for (std::size_t i = 0; i < stats.mean.size(); ++i) {
    const double se = std::sqrt(stats.variance[i] / rep.replicates);
    CHECK(std::abs(stats.mean[i] - 0.5) <= 4.0 * se);
  }

  // Jensen: mean sup^2 >= bias_sup^2 up to MC noise.
  CHECK(rep.mse >= rep.bias_sup * rep.bias_sup - 5.0 * rep.mse_se);
}

TEST_CASE("mse experiment is reproducible and thread-count independent") {
  RiskExperimentConfig config{make_interval(32), SpectralDensity::cosine(0.5, 0.1), 4, 4, 64,
                              7, 1};
  const auto a = run_mse_experiment(config);
  const auto b = run_mse_experiment(config);
  config.threads = 2;
  const auto c = run_mse_experiment(config);
  std::ostringstream sa, sb, sc;
  write_risk_csv_row(sa, a);
  write_risk_csv_row(sb, b);
  write_risk_csv_row(sc, c);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str() == sc.str());
}

TEST_CASE("mse experiment accepts the degenerate two-replicate case") {
  RiskExperimentConfig config{make_interval(16), SpectralDensity::constant(0.5), 2, 4, 2, 5, 1};
  const auto rep = run_mse_experiment(config);
  CHECK(rep.replicates == 2);
  CHECK(std::isfinite(rep.mse));
  CHECK(std::isfinite(rep.mse_se));
  CHECK_THROWS_AS(
      run_mse_experiment(RiskExperimentConfig{make_interval(16),
                                              SpectralDensity::constant(0.5), 2, 4, 1, 5, 1}),
      std::invalid_argument);
}

TEST_CASE("documented replicate seed split matches a manual loop") {
  const auto domain = make_interval(32);
  const auto density = SpectralDensity::cosine(0.5, 0.1);
  const int k = 4;
  RiskExperimentConfig config{domain, density, k, 4, 50, 99, 1};
  PointStats stats;
  const auto rep = run_mse_experiment(config, &stats);

  // Manual replication with the documented rule: replicate r uses stream
  // seed splitmix64(seed + r).
  const auto tapers = compute_tapers(domain, {bandwidth_for_count(domain, k), k});
  const auto model = CirculantModel::build(density, 31);
  const FrequencyGrid grid(1, 4 * 31);
  std::vector<double> mean(static_cast<std::size_t>(grid.size()), 0.0);
  std::vector<double> sup_sq(50);
  for (int r = 0; r < 50; ++r) {
    ProcessSample sample(domain,
                         model.sample_on_domain(domain, splitmix64(99 + static_cast<std::uint64_t>(r))));
    const auto est = multitaper_estimate(sample, tapers, grid);
    double worst = 0.0;
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      const auto xi = grid.point(i);
      mean[static_cast<std::size_t>(i)] += est.grid_values()[static_cast<std::size_t>(i)] / 50.0;
      worst = std::max(worst,
                       std::abs(est.grid_values()[static_cast<std::size_t>(i)] -
                                density.value(xi)));
    }
    sup_sq[static_cast<std::size_t>(r)] = worst * worst;
  }
  double mse = 0.0;
  for (double v : sup_sq) mse += v / 50.0;
  CHECK(rep.mse == doctest::Approx(mse).epsilon(1e-12));
  for (std::size_t i = 0; i < mean.size(); ++i)
    CHECK(stats.mean[i] == doctest::Approx(mean[i]).epsilon(1e-10));

  // Per-point bias-variance identity at the argmax frequency: the population
  // moments reconstruct the per-point MSE exactly.
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < stats.mean.size(); ++i) {
    if (stats.variance[i] > stats.variance[argmax]) argmax = i;
  }
  double point_mse = 0.0;
  for (int r = 0; r < 50; ++r) {
    ProcessSample sample(domain,
                         model.sample_on_domain(domain, splitmix64(99 + static_cast<std::uint64_t>(r))));
    const auto est = multitaper_estimate(sample, tapers, grid);
    const double dv = est.grid_values()[argmax] -
                      stats.density_values[argmax];
    point_mse += dv * dv / 50.0;
  }
  const double bias = stats.mean[argmax] - stats.density_values[argmax];
  const double var_pop = stats.variance[argmax] * 49.0 / 50.0;
  CHECK(point_mse == doctest::Approx(bias * bias + var_pop).epsilon(1e-10));
}

TEST_CASE("variance shrinks as the taper count grows") {
  std::vector<double> vars;
  for (int k : {4, 8, 16, 32}) {
    RiskExperimentConfig config{make_interval(1024), SpectralDensity::constant(0.5), k, 4, 300,
                                11, 2};
    vars.push_back(run_mse_experiment(config).variance_max);
  }
  for (std::size_t i = 1; i < vars.size(); ++i) CHECK(vars[i] < vars[i - 1]);
}

TEST_CASE("tail check basics") {
  TailConfig config{make_interval(64),
                    SpectralDensity::constant(0.5),
                    8,
                    {0.0, 0.1, 0.2, 0.4, 0.8},
                    400,
                    17,
                    2};
  const auto rep = tail_check(config);
  REQUIRE(rep.empirical.size() == 5);
  CHECK(rep.empirical[0] == 1.0);
  for (std::size_t i = 1; i < rep.empirical.size(); ++i)
    CHECK(rep.empirical[i] <= rep.empirical[i - 1]);
  for (std::size_t i = 0; i < rep.empirical.size(); ++i) {
    CHECK(rep.empirical[i] >= 0.0);
    CHECK(rep.empirical[i] <= 1.0);
    CHECK(rep.bound[i] >= rep.empirical[i] - 1e-12);
  }
  CHECK(rep.fitted_c >= 0.0);
  CHECK(rep.sup_density == doctest::Approx(0.5));

  TailConfig bad = config;
  bad.thresholds = {0.2, 0.1};
  CHECK_THROWS_AS(tail_check(bad), std::invalid_argument);
}

TEST_CASE("rate experiment synthetic injection echoes the exponent") {
  RateExperimentConfig config;
  config.family = DomainFamily::kInterval;
  config.sizes = {128, 256, 512};
  config.density_spec = "constant(0.5)";
  config.synthetic_exponent = 0.8;
  const auto result = run_rate_experiment(config);
  CHECK(result.fit.slope == doctest::Approx(0.8).epsilon(1e-9));
  REQUIRE(result.points.size() == 3);
  CHECK(result.points[0].rate_functional ==
        doctest::Approx(std::log(128.0) / 128.0).epsilon(1e-12));

  RateExperimentConfig too_small = config;
  too_small.sizes = {128, 256};
  CHECK_THROWS_AS(run_rate_experiment(too_small), std::invalid_argument);
}
