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
#include <random>

#include "doctest.h"
#include "mtspec/circulant.hpp"
#include "mtspec/estimator.hpp"
#include "oracles.hpp"

using namespace mtspec;

namespace {

std::vector<double> seeded_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

// Random even trigonometric polynomial of the given degree.
MtEstimate random_polynomial(int degree, int grid_resolution, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Point> lags;
  std::vector<double> coefs;
  lags.push_back({0});
  coefs.push_back(normal(rng));
  for (Coord l = 1; l <= degree; ++l) {
    const double c = normal(rng) / (1.0 + 0.1 * l);
    lags.push_back({l});
    coefs.push_back(c);
    lags.push_back({static_cast<Coord>(-l)});
    coefs.push_back(c);
  }
  FrequencyGrid grid(1, grid_resolution);
  auto values = evaluate_on_grid(lags, coefs, grid);
  return MtEstimate(degree, lags, coefs, grid, values);
}

}  // namespace

TEST_CASE("zero sample gives the zero estimate") {
  const auto domain = make_interval(12);
  const auto tapers = compute_tapers(domain, {0.25, 3});
  ProcessSample sample(domain, std::vector<double>(12, 0.0));
  const auto est = multitaper_estimate(sample, tapers, FrequencyGrid(1, 16));
  for (double v : est.grid_values()) CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  for (double v : est.lag_coefficients()) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("first taper as data concentrates to one at zero frequency") {
  const auto domain = make_interval(16);
  const auto tapers = compute_tapers(domain, {0.25, 1});
  std::vector<double> values(16);
  for (int i = 0; i < 16; ++i) values[static_cast<std::size_t>(i)] = tapers.vectors()(i, 0);
  ProcessSample sample(domain, values);
  const double xi0 = 0.0;
  CHECK(estimate_at(sample, tapers, {&xi0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("estimate matches the naive oracle on a seeded sample") {
  const auto domain = make_interval(16);
  const auto tapers = compute_tapers(domain, {0.25, 4});
  ProcessSample sample(domain, seeded_noise(16, 2024));
  const FrequencyGrid grid(1, 64);
  const auto est = multitaper_estimate(sample, tapers, grid);
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    const auto xi = grid.point(i);
    const double naive = oracle::multitaper_naive(domain.points(), sample.values,
                                                  tapers.vectors(), xi);
    CHECK(std::abs(est.grid_values()[static_cast<std::size_t>(i)] - naive) < 1e-10);
    CHECK(std::abs(est.value_at(xi) - naive) < 1e-10);
  }
}

TEST_CASE("estimate matches the naive oracle on a blob domain in 2d") {
  const auto domain = make_blob(2, 30, 5);
  const int k = 3;
  const auto tapers = compute_tapers(domain, {0.4, k});
  ProcessSample sample(domain, seeded_noise(static_cast<std::size_t>(domain.cardinality()), 7));
  const FrequencyGrid grid(2, 9);
  const auto est = multitaper_estimate(sample, tapers, grid);
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    const auto xi = grid.point(i);
    const double naive = oracle::multitaper_naive(domain.points(), sample.values,
                                                  tapers.vectors(), xi);
    CHECK(std::abs(est.grid_values()[static_cast<std::size_t>(i)] - naive) < 1e-10);
  }
}

TEST_CASE("estimate properties") {
  const auto domain = make_interval(24);
  const auto tapers = compute_tapers(domain, {0.25, 6});
  ProcessSample sample(domain, seeded_noise(24, 99));
  const auto est = multitaper_estimate(sample, tapers, FrequencyGrid(1, 92));
  CHECK(est.degree() == 23);
  // grid consistency with the trig polynomial
  for (std::int64_t i = 0; i < est.grid().size(); i += 7) {
    CHECK(std::abs(est.grid_values()[static_cast<std::size_t>(i)] -
                   est.value_at(est.grid().point(i))) < 1e-8);
  }
  // nonnegativity and lag symmetry
  for (double v : est.grid_values()) CHECK(v >= -1e-10);
  for (std::size_t l = 0; l < est.lags().size(); ++l) {
    Point neg = est.lags()[l];
    for (auto& c : neg) c = static_cast<Coord>(-c);
    const auto it = std::lower_bound(est.lags().begin(), est.lags().end(), neg);
    REQUIRE(it != est.lags().end());
    const auto idx = static_cast<std::size_t>(it - est.lags().begin());
    CHECK(est.lag_coefficients()[l] ==
          doctest::Approx(est.lag_coefficients()[idx]).epsilon(1e-12));
  }
}

TEST_CASE("direct and fft grid paths agree") {
  const auto domain = make_blob(2, 40, 11);
  const auto tapers = compute_tapers(domain, {0.35, 4});
  ProcessSample sample(domain, seeded_noise(static_cast<std::size_t>(domain.cardinality()), 3));
  const FrequencyGrid grid(2, 24);
  const auto est = multitaper_estimate(sample, tapers, grid);
  const auto direct = evaluate_on_grid(est.lags(), est.lag_coefficients(), grid, GridEval::kDirect);
  const auto fft = evaluate_on_grid(est.lags(), est.lag_coefficients(), grid, GridEval::kFft);
  for (std::size_t i = 0; i < direct.size(); ++i) CHECK(std::abs(direct[i] - fft[i]) < 1e-8);
}

TEST_CASE("domain mismatch is rejected") {
  const auto tapers = compute_tapers(make_interval(8), {0.25, 2});
  ProcessSample sample(make_interval(9), std::vector<double>(9, 0.0));
  CHECK_THROWS_AS(multitaper_estimate(sample, tapers, FrequencyGrid(1, 8)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ProcessSample(make_interval(3), {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(ProcessSample(make_interval(2), {1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("quadratic form matrix identities") {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto domain = trial % 2 == 0 ? make_interval(10 + trial)
                                       : make_blob(2, 25 + trial, 100 + static_cast<std::uint64_t>(trial));
    const int n = static_cast<int>(domain.cardinality());
    const int k = 1 + trial % 4;
    const auto tapers = compute_tapers(domain, {0.3, std::min(k, n)});
    std::vector<double> xi(static_cast<std::size_t>(domain.dimension()));
    for (auto& x : xi) x = unif(rng);

    const Eigen::MatrixXcd v = quadratic_form_matrix(tapers, xi);
    CHECK((v - v.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    const double frob = std::sqrt(v.cwiseAbs2().sum());
    CHECK(std::abs(frob - 1.0 / std::sqrt(tapers.count())) < 1e-10);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(v);
    CHECK(eig.eigenvalues().maxCoeff() <= 1.0 / tapers.count() + 1e-10);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);

    // quadratic identity against several samples
    for (int s = 0; s < 5; ++s) {
      ProcessSample sample(domain, seeded_noise(static_cast<std::size_t>(n),
                                                777 + static_cast<std::uint64_t>(trial * 10 + s)));
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x(i) = sample.values[static_cast<std::size_t>(i)];
      const double quad = (x.transpose() * (v * x).real())(0);
      CHECK(std::abs(quad - estimate_at(sample, tapers, xi)) < 1e-10);
    }
  }
}

TEST_CASE("complete basis gives identity over K at any frequency") {
  const auto domain = make_interval(6);
  const auto tapers = compute_tapers(domain, {0.5, 6});
  const double xi = 0.0;
  const Eigen::MatrixXcd v = quadratic_form_matrix(tapers, {&xi, 1});
  CHECK((v - Eigen::MatrixXcd::Identity(6, 6) / 6.0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sup norm distance") {
  // Exact coefficients of a bandlimited density give distance 0.
  const SpectralDensity cos = SpectralDensity::cosine(0.5, 0.2);
  {
    std::vector<Point> lags{{-1}, {0}, {1}};
    std::vector<double> coefs{0.1, 0.5, 0.1};
    FrequencyGrid grid(1, 8);
    MtEstimate est(1, lags, coefs, grid, evaluate_on_grid(lags, coefs, grid));
    CHECK(sup_norm_distance(cos, est, 8) < 1e-10);
    CHECK_THROWS_AS(sup_norm_distance(cos, est, 3), std::invalid_argument);
  }
  // Constant vs constant: |c1 - c2|.
  {
    std::vector<Point> lags{{0}};
    std::vector<double> coefs{0.3};
    FrequencyGrid grid(1, 4);
    MtEstimate est(1, lags, coefs, grid, evaluate_on_grid(lags, coefs, grid));
    CHECK(sup_norm_distance(SpectralDensity::constant(0.75), est, 4) ==
          doctest::Approx(0.45).epsilon(1e-12));
  }
}

TEST_CASE("grid refinement self-consistency") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto est = random_polynomial(16, 8 * 16, seed);
    double coarse = 0.0;
    for (double v : est.grid_values()) coarse = std::max(coarse, std::abs(v));
    const auto fine = evaluate_on_grid(est.lags(), est.lag_coefficients(),
                                       FrequencyGrid(1, 64 * 16));
    double best = 0.0;
    for (double v : fine) best = std::max(best, std::abs(v));
    CHECK(coarse <= best + 1e-12);
    CHECK(coarse >= 0.98 * best);
  }
}

TEST_CASE("sampling inequality proxy constant stays small") {
  double worst_ratio = 1.0;
  for (std::uint64_t seed = 10; seed < 30; ++seed) {
    const auto est = random_polynomial(16, 4 * 16, seed);
    double coarse = 0.0;
    for (double v : est.grid_values()) coarse = std::max(coarse, std::abs(v));
    const auto fine = evaluate_on_grid(est.lags(), est.lag_coefficients(),
                                       FrequencyGrid(1, 64 * 16));
    double sup = 0.0;
    for (double v : fine) sup = std::max(sup, std::abs(v));
    if (coarse > 0) worst_ratio = std::max(worst_ratio, sup / coarse);
  }
  MESSAGE("empirical 4-omega sampling constant: ", worst_ratio);
  CHECK(worst_ratio < 10.0);
}

TEST_CASE("translation invariance") {
  const auto domain = make_blob(2, 35, 17);
  std::vector<Point> shifted;
  for (Point p : domain.points()) {
    p[0] = static_cast<Coord>(p[0] + 5);
    p[1] = static_cast<Coord>(p[1] - 3);
    shifted.push_back(p);
  }
  const auto moved = AcquisitionDomain::from_points(2, shifted);
  const auto values = seeded_noise(static_cast<std::size_t>(domain.cardinality()), 4321);

  const auto t1 = compute_tapers(domain, {0.3, 3});
  const auto t2 = compute_tapers(moved, {0.3, 3});
  const FrequencyGrid grid(2, 20);
  const auto e1 = multitaper_estimate(ProcessSample(domain, values), t1, grid);
  const auto e2 = multitaper_estimate(ProcessSample(moved, values), t2, grid);
  for (std::size_t i = 0; i < e1.grid_values().size(); ++i)
    CHECK(e1.grid_values()[i] == doctest::Approx(e2.grid_values()[i]).epsilon(1e-12));
  for (std::size_t i = 0; i < e1.lag_coefficients().size(); ++i)
    CHECK(e1.lag_coefficients()[i] ==
          doctest::Approx(e2.lag_coefficients()[i]).epsilon(1e-12));
}

TEST_CASE("expected estimate is flat for white noise") {
  const auto domain = make_interval(20);
  const auto tapers = compute_tapers(domain, {0.2, 4});
  const auto acov = autocovariance(SpectralDensity::constant(0.5), domain.max_extent());
  const auto lags = expected_estimate_lags(tapers, acov);
  const auto values = evaluate_on_grid(domain.difference_set(), lags, FrequencyGrid(1, 76));
  for (double v : values) CHECK(v == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("bias bound arithmetic") {
  const auto domain = make_interval(1000);
  CHECK(bias_bound(domain, 10, 1.0) == doctest::Approx(1.4430216196844382).epsilon(1e-12));
  CHECK(bias_bound(domain, 10, 0.0) == 0.0);
  // First term reaches 1 at K = N.
  CHECK(bias_bound(domain, 1000, 1.0) >= 1.0);
  CHECK_THROWS_AS(bias_bound(domain, 0, 1.0), std::invalid_argument);
}

TEST_CASE("mse bound arithmetic") {
  const auto domain = make_interval(1000);
  const auto b = mse_bound(domain, 31);
  const double log_diam = std::log(999.0);
  const double expect_var = std::max(log_diam / 31, std::pow(log_diam / 31, 2.0));
  const double expect_smooth = std::pow(31.0 / 1000.0, 4.0);
  const double lf = 1.0 + std::log(500.0);
  const double expect_boundary = 4.0 / (31.0 * 31.0) * lf * lf;
  CHECK(b.value ==
        doctest::Approx(expect_var + expect_smooth + expect_boundary).epsilon(1e-14));
  CHECK(b.value == doctest::Approx(0.4394512).epsilon(1e-6));
  CHECK(b.precondition_met);

  // K -> N drives the smooth bias term to 1.
  CHECK(mse_bound(domain, 1000).bias_smooth_term == doctest::Approx(1.0));
  // diam = e gives a unit max term at K = 1 (three-point domain of diameter e).
  const auto tiny = AcquisitionDomain::from_points(1, {{0}, {1}, {3}});
  (void)tiny;
  CHECK_THROWS_AS(mse_bound(make_interval(2), 1), std::invalid_argument);
}

TEST_CASE("mse bound variance term shape") {
  // With log(diam)/K = 1 the max over p of the power terms equals 1.
  const auto domain = make_interval(1000);
  const auto b = mse_bound(domain, 31);
  CHECK(b.variance_term == doctest::Approx(std::log(999.0) / 31.0).epsilon(1e-12));
  // For K smaller than log(diam) the squared branch dominates.
  const auto b2 = mse_bound(domain, 3);
  CHECK(b2.variance_term == doctest::Approx(std::pow(std::log(999.0) / 3.0, 2.0)).epsilon(1e-12));
}

TEST_CASE("corollary taper count") {
  const auto c1 = corollary_taper_count(make_interval(1000));
  CHECK(c1.count == 370);
  CHECK_FALSE(c1.clamped);
  CHECK(c1.diameter_condition_ok);

  const auto c2 = corollary_taper_count(make_rectangle({32, 32}));
  CHECK(c2.count == 247);
  CHECK(c2.diameter_condition_ok);

  const auto c3 = corollary_taper_count(make_interval(3));
  CHECK(c3.count <= 3);

  // Sparse two-point domain: the count clamps to N and the diameter
  // condition fails.
  const auto sparse = AcquisitionDomain::from_points(1, {{0}, {1000}});
  const auto c4 = corollary_taper_count(sparse);
  CHECK(c4.count == 2);
  CHECK(c4.clamped);
  CHECK_FALSE(c4.diameter_condition_ok);

  CHECK_THROWS_AS(corollary_taper_count(make_interval(2)), std::invalid_argument);
}
