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
#include <numbers>
#include <random>

#include "doctest.h"
#include "mtspec/tapers.hpp"
#include "oracles.hpp"

using namespace mtspec;

namespace {

// Band-energy of a unit vector on an interval domain, by quadrature over
// [-W/2, W/2]; independent of the concentration-matrix identity.
double band_energy(const std::vector<double>& v, double w) {
  const auto f = [&](double xi) {
    double re = 0.0, im = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) {
      const double phase = 2.0 * std::numbers::pi * xi * static_cast<double>(n + 1);
      re += v[n] * std::cos(phase);
      im += v[n] * std::sin(phase);
    }
    return re * re + im * im;
  };
  return oracle::integrate(f, -w / 2, w / 2, 1e-12);
}

double gram_deviation(const TaperSet& tapers) {
  const Eigen::MatrixXd gram = tapers.vectors().transpose() * tapers.vectors();
  return (gram - Eigen::MatrixXd::Identity(tapers.count(), tapers.count()))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

TEST_CASE("concentration matrix entries") {
  const auto domain = make_interval(8);
  const double w = 0.5;
  const auto m = concentration_matrix(domain, w);
  for (int i = 0; i < 8; ++i) CHECK(m(i, i) == doctest::Approx(0.5).epsilon(1e-15));
  // d=1 neighbor entry at W=0.5: sin(pi/2)/pi = 1/pi.
  CHECK(m(0, 1) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
  CHECK(m.trace() == doctest::Approx(8 * 0.5).epsilon(1e-12));
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(concentration_matrix(domain, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(concentration_matrix(domain, 1.5), std::invalid_argument);
}

TEST_CASE("concentration matrix in two dimensions") {
  const auto domain = make_rectangle({3, 3});
  const double w = 0.4;
  const auto m = concentration_matrix(domain, w);
  CHECK(m(0, 0) == doctest::Approx(w * w).epsilon(1e-15));
  CHECK(m.trace() == doctest::Approx(9 * w * w).epsilon(1e-12));
}

TEST_CASE("single point taper") {
  const auto domain = AcquisitionDomain::from_points(1, {{3}});
  const auto ts = compute_tapers(domain, {0.3, 1});
  CHECK(ts.vectors()(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ts.eigenvalues()[0] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("trace identity across the spectrum") {
  const auto domain = make_interval(64);
  const auto spectrum = concentration_spectrum(domain, 0.1);
  double sum = 0.0;
  for (double v : spectrum) sum += v;
  CHECK(sum == doctest::Approx(6.4).epsilon(1e-10));
}

TEST_CASE("eigenpairs match an independent Jacobi oracle") {
  const auto domain = make_interval(8);
  const auto m = concentration_matrix(domain, 0.25);
  std::vector<double> oracle_values;
  Eigen::MatrixXd oracle_vectors;
  oracle::jacobi_eigen(m, &oracle_values, &oracle_vectors);
  const auto ts = compute_tapers(domain, {0.25, 2}, TaperSolve::kDense);
  for (int k = 0; k < 2; ++k) {
    CHECK(ts.eigenvalues()[static_cast<std::size_t>(k)] ==
          doctest::Approx(oracle_values[static_cast<std::size_t>(k)]).epsilon(1e-10));
    // Vectors agree up to sign.
    const double dot = std::abs(ts.vectors().col(k).dot(oracle_vectors.col(k)));
    CHECK(dot == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("default taper count") {
  CHECK(default_taper_count(make_interval(64), 0.1) == 7);
  CHECK(default_taper_count(make_rectangle({10, 10}), 0.1) == 1);
  CHECK(default_taper_count(make_interval(8), 1.0) == 8);
  CHECK(default_taper_count(make_interval(5), 0.2) == 1);
}

TEST_CASE("validation errors") {
  const auto domain = make_interval(8);
  CHECK_THROWS_AS(compute_tapers(domain, {0.25, 9}), std::invalid_argument);
  CHECK_THROWS_AS(compute_tapers(domain, {0.25, 0}), std::invalid_argument);
  CHECK_THROWS_AS(compute_tapers(domain, {-0.1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(compute_tapers(make_rectangle({2, 4}), {0.3, 2}, TaperSolve::kTridiagonal),
                  std::invalid_argument);
}

TEST_CASE("orthonormality and eigenvalue range across a mixed corpus") {
  struct Case {
    AcquisitionDomain domain;
    double w;
  };
  std::vector<Case> corpus;
  for (double w : {0.08, 0.2, 0.45})
    for (std::int64_t n : {3, 17, 100}) corpus.push_back({make_interval(n), w});
  corpus.push_back({make_rectangle({5, 7}), 0.3});
  corpus.push_back({make_rectangle({3, 3, 3}), 0.4});
  corpus.push_back({make_disk(3.0, 2), 0.25});
  for (std::uint64_t seed = 1; seed <= 4; ++seed)
    corpus.push_back({make_blob(2, 80, seed), 0.2});

  for (const auto& c : corpus) {
    const int k = default_taper_count(c.domain, c.w);
    const auto ts = compute_tapers(c.domain, {c.w, k});
    CHECK(gram_deviation(ts) <= 1e-8);
    for (int i = 0; i < k; ++i) {
      CHECK(ts.eigenvalues()[static_cast<std::size_t>(i)] > 0.0);
      CHECK(ts.eigenvalues()[static_cast<std::size_t>(i)] <= 1.0 + 1e-8);
      if (i > 0)
        CHECK(ts.eigenvalues()[static_cast<std::size_t>(i)] <=
              ts.eigenvalues()[static_cast<std::size_t>(i - 1)] + 1e-12);
    }
  }
}

TEST_CASE("first taper maximizes band concentration") {
  for (std::int64_t n : {6, 9, 12}) {
    const auto domain = make_interval(n);
    const double w = 0.3;
    const auto ts = compute_tapers(domain, {w, 1});
    std::vector<double> top(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
      top[static_cast<std::size_t>(i)] = ts.vectors()(i, 0);
    const double best = band_energy(top, w);
    CHECK(best == doctest::Approx(ts.eigenvalues()[0]).epsilon(1e-9));

    std::mt19937_64 rng(7 + static_cast<std::uint64_t>(n));
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> v(static_cast<std::size_t>(n));
      double norm = 0.0;
      for (auto& x : v) {
        x = normal(rng);
        norm += x * x;
      }
      norm = std::sqrt(norm);
      for (auto& x : v) x /= norm;
      CHECK(band_energy(v, w) <= best + 1e-9);
    }
  }
}

TEST_CASE("complete taper set is an orthonormal basis") {
  const auto domain = make_rectangle({3, 4});
  const int n = static_cast<int>(domain.cardinality());
  const auto ts = compute_tapers(domain, {0.35, n});
  const Eigen::MatrixXd outer = ts.vectors() * ts.vectors().transpose();
  CHECK((outer - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("tridiagonal fast path agrees with the dense solve") {
  for (double w : {0.1, 0.25, 0.52}) {
    const auto domain = make_interval(64);
    const int k = default_taper_count(domain, w);
    const auto dense = compute_tapers(domain, {w, k}, TaperSolve::kDense);
    const auto fast = compute_tapers(domain, {w, k}, TaperSolve::kTridiagonal);
    CHECK(gram_deviation(fast) <= 1e-10);
    const auto m = concentration_matrix(domain, w);
    for (int i = 0; i < k; ++i) {
      CHECK(fast.eigenvalues()[static_cast<std::size_t>(i)] ==
            doctest::Approx(dense.eigenvalues()[static_cast<std::size_t>(i)]).epsilon(1e-9));
      // Each fast-path taper is an eigenvector of the concentration matrix.
      const Eigen::VectorXd residual =
          m * fast.vectors().col(i) -
          fast.eigenvalues()[static_cast<std::size_t>(i)] * fast.vectors().col(i);
      CHECK(residual.cwiseAbs().maxCoeff() <= 1e-8);
      // Where the spectrum is not clustered the vectors must agree outright
      // (sign convention makes them comparable).
      const bool isolated =
          (i == 0 || dense.eigenvalues()[static_cast<std::size_t>(i - 1)] -
                             dense.eigenvalues()[static_cast<std::size_t>(i)] >
                         1e-6) &&
          (i + 1 == k || dense.eigenvalues()[static_cast<std::size_t>(i)] -
                                 dense.eigenvalues()[static_cast<std::size_t>(i + 1)] >
                             1e-6);
      if (isolated) {
        CHECK((fast.vectors().col(i) - dense.vectors().col(i)).cwiseAbs().maxCoeff() <= 1e-7);
      }
    }
  }
}

TEST_CASE("sign convention is applied") {
  const auto ts = compute_tapers(make_interval(16), {0.25, 4});
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 16; ++i) {
      if (std::abs(ts.vectors()(i, k)) > 1e-12) {
        CHECK(ts.vectors()(i, k) > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("bandwidth for count inverts the coupling") {
  const auto domain = make_rectangle({8, 8});
  const double w = bandwidth_for_count(domain, 16);
  CHECK(w == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(default_taper_count(domain, w) == 16);
}
