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
#include <complex>
#include <numbers>

#include "doctest.h"
#include "mtspec/circulant.hpp"
#include "mtspec/density.hpp"
#include "mtspec/errors.hpp"
#include "mtspec/fano.hpp"
#include "oracles.hpp"

using namespace mtspec;

namespace {

// Value-only wrapper used to exercise the finite-difference fallback.
class ValueOnly final : public DensityImpl {
 public:
  explicit ValueOnly(SpectralDensity inner) : inner_(std::move(inner)) {}
  int dimension() const override { return inner_.dimension(); }
  double value(std::span<const double> xi) const override { return inner_.value(xi); }
  std::string name() const override { return "value_only"; }

 private:
  SpectralDensity inner_;
};

}  // namespace

TEST_CASE("autocovariance of simple densities") {
  const auto acov_const = autocovariance(SpectralDensity::constant(0.75), 4);
  CHECK(acov_const.at({0}) == doctest::Approx(0.75).epsilon(1e-12));
  for (Coord n = 1; n <= 4; ++n) CHECK(std::abs(acov_const.at({n})) < 1e-12);

  const auto acov_cos = autocovariance(SpectralDensity::cosine(0.5, 0.3), 4);
  CHECK(acov_cos.at({0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(acov_cos.at({1}) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(acov_cos.at({-1}) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(std::abs(acov_cos.at({2})) < 1e-12);
}

TEST_CASE("fano autocovariance matches adaptive quadrature") {
  const FanoClass cls = build_fano_class(1, 4, 0.05);
  const SpectralDensity s1 = cls.density(1);
  const auto acov = autocovariance(s1, 32);
  for (Coord n = 0; n <= 32; ++n) {
    const auto f = [&](double xi) {
      return s1.value({&xi, 1}) * std::cos(2.0 * std::numbers::pi * n * xi);
    };
    const double expect = oracle::integrate(f, -0.5, 0.5, 1e-13);
    CHECK(std::abs(acov.at({n}) - expect) < 1e-8);
    CHECK(std::abs(acov.at({static_cast<Coord>(-n)}) - expect) < 1e-8);
  }
}

TEST_CASE("c2 norm") {
  CHECK(c2_norm(SpectralDensity::constant(0.5), 64) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c2_norm(SpectralDensity::cosine(0.5, 0.01), 512) ==
        doctest::Approx(0.51).epsilon(1e-10));
  CHECK(c2_norm(SpectralDensity::cosine(0.5, 0.02), 512) ==
        doctest::Approx(0.02 * 4 * std::numbers::pi * std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("c2 norm finite-difference fallback") {
  const SpectralDensity analytic = SpectralDensity::cosine(0.5, 0.02);
  const SpectralDensity wrapped(std::make_shared<ValueOnly>(analytic));
  CHECK_FALSE(wrapped.has_derivatives());
  const double a = c2_norm(analytic, 128);
  const double b = c2_norm(wrapped, 128);
  CHECK(b == doctest::Approx(a).epsilon(1e-5));
}

TEST_CASE("partial fourier sums") {
  const SpectralDensity flat = SpectralDensity::constant(0.4);
  for (int p : {0, 1, 3}) {
    const double xi = 0.3;
    CHECK(partial_fourier_sum(flat, p, {&xi, 1}) == doctest::Approx(0.4).epsilon(1e-10));
  }
  const SpectralDensity cos = SpectralDensity::cosine(0.5, 0.2);
  for (double xi : {0.0, 0.17, 0.5, 0.83}) {
    CHECK(partial_fourier_sum(cos, 0, {&xi, 1}) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(partial_fourier_sum(cos, 1, {&xi, 1}) ==
          doctest::Approx(cos.value({&xi, 1})).epsilon(1e-10));
  }
}

TEST_CASE("density registry") {
  CHECK(parse_density_spec("constant(0.5)").dimension() == 1);
  CHECK(parse_density_spec("constant(0.5,2)").dimension() == 2);
  CHECK(parse_density_spec("cosine(0.5,0.2)").value1(0.0) == doctest::Approx(0.7));
  CHECK(parse_density_spec("fano(1,4,0.02,1)").dimension() == 1);
  CHECK(parse_density_spec("fano(1,4,0.02,0)").value1(0.37) == doctest::Approx(0.5));
  CHECK_THROWS_AS(parse_density_spec("cosine(0.5,0.9)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_density_spec("constant(-1)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_density_spec("nope(1)"), std::invalid_argument);
}

TEST_CASE("circulant model of a constant density") {
  const auto model = CirculantModel::build(SpectralDensity::constant(0.8), 3);
  for (double v : model.eigenvalues()) CHECK(v == doctest::Approx(0.8).epsilon(1e-10));
  for (Coord n = -3; n <= 3; ++n) {
    for (Coord m = -3; m <= 3; ++m) {
      const double expect = n == m ? 0.8 : 0.0;
      CHECK(model.covariance({n}, {m}) == doctest::Approx(expect).scale(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("circulant eigenvalues of the cosine density") {
  // Amplitude 0.2: eigenvalues 0.7, 0.5 + 0.2 cos(2 pi/5), 0.5 + 0.2 cos(4 pi/5).
  const auto model = CirculantModel::build(SpectralDensity::cosine(0.5, 0.2), 2);
  CHECK(model.eigenvalue_at({0}) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(model.eigenvalue_at({1}) == doctest::Approx(0.5618033988749895).epsilon(1e-12));
  CHECK(model.eigenvalue_at({-1}) == doctest::Approx(0.5618033988749895).epsilon(1e-12));
  CHECK(model.eigenvalue_at({2}) == doctest::Approx(0.3381966011250105).epsilon(1e-12));
  CHECK(model.eigenvalue_at({-2}) == doctest::Approx(0.3381966011250105).epsilon(1e-12));
}

TEST_CASE("circulant row sums equal the zero-frequency eigenvalue") {
  const auto model = CirculantModel::build(SpectralDensity::cosine(0.5, 0.2), 3);
  for (Coord n = -3; n <= 3; ++n) {
    double row = 0.0;
    for (Coord m = -3; m <= 3; ++m) row += model.covariance({n}, {m});
    CHECK(row == doctest::Approx(model.eigenvalue_at({0})).epsilon(1e-10));
  }
}

TEST_CASE("wrap rule covers both branches") {
  const auto model = CirculantModel::build(SpectralDensity::cosine(0.5, 0.2), 2);
  const auto acov = model.autocov();
  // |n - m| = 1 direct branch; |n - m| = 4 wraps to 2*2+1-4 = 1.
  CHECK(model.covariance({2}, {1}) == doctest::Approx(acov.at({1})).epsilon(1e-14));
  CHECK(model.covariance({2}, {-2}) == doctest::Approx(acov.at({1})).epsilon(1e-14));
}

TEST_CASE("sampler determinism and realness") {
  const auto model = CirculantModel::build(SpectralDensity::cosine(0.5, 0.2), 4);
  const auto a = model.sample(123);
  const auto b = model.sample(123);
  CHECK(a == b);
  const auto c = model.sample(124);
  CHECK(a != c);
  for (double v : a) CHECK(std::isfinite(v));
}

TEST_CASE("white-noise sampler moments") {
  const auto model = CirculantModel::build(SpectralDensity::constant(1.0), 2);
  const int r = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < r; ++i) {
    const auto y = model.sample(1000 + static_cast<std::uint64_t>(i));
    sum += y[0];
    sum2 += y[0] * y[0];
  }
  const double mean = sum / r;
  const double var = sum2 / r - mean * mean;
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(r)));
  CHECK(std::abs(var - 1.0) <= 3.0 * std::sqrt(2.0 / r));
}

TEST_CASE("sampler covariance matches sigma and diagonalization holds") {
  const int omega = 2;
  const auto model = CirculantModel::build(SpectralDensity::cosine(0.5, 0.2), omega);
  const auto acov = model.autocov();
  const int side = 2 * omega + 1;
  const int r = 30000;

  // Empirical covariance of (Y_0, Y_1) vs sigma_1, and off-diagonal
  // covariance of Z = U Y vs 0 (U the unitary DFT).
  double c01 = 0.0;
  std::vector<std::complex<double>> zsum(static_cast<std::size_t>(side), 0.0);
  double zprod_re = 0.0, zprod_im = 0.0, zprod_re2 = 0.0, zprod_im2 = 0.0;
  for (int i = 0; i < r; ++i) {
    const auto y = model.sample(777 + static_cast<std::uint64_t>(i));
    c01 += y[0] * y[1];
    std::vector<std::complex<double>> z(static_cast<std::size_t>(side), 0.0);
    for (int k = 0; k < side; ++k) {
      for (int n = 0; n < side; ++n) {
        const double phase = 2.0 * std::numbers::pi * k * n / side;
        z[static_cast<std::size_t>(k)] +=
            y[static_cast<std::size_t>(n)] * std::polar(1.0 / std::sqrt(side), phase);
      }
    }
    const std::complex<double> p = z[1] * std::conj(z[2]);
    zprod_re += p.real();
    zprod_im += p.imag();
    zprod_re2 += p.real() * p.real();
    zprod_im2 += p.imag() * p.imag();
  }
  c01 /= r;
  const double se01 = std::sqrt(2.0 / r) * model.eigenvalue_at({0});  // generous scale
  CHECK(std::abs(c01 - acov.at({1})) <= 4.0 * se01);

  const double mean_re = zprod_re / r;
  const double mean_im = zprod_im / r;
  const double se_re = std::sqrt((zprod_re2 / r - mean_re * mean_re) / r);
  const double se_im = std::sqrt((zprod_im2 / r - mean_im * mean_im) / r);
  CHECK(std::abs(mean_re) <= 4.0 * se_re);
  CHECK(std::abs(mean_im) <= 4.0 * se_im);
}

TEST_CASE("restriction reproduces the Toeplitz law") {
  // Covariance of the restriction to {0..omega} is the plain Toeplitz matrix
  // of sigma: check empirically on a short window.
  const int omega = 3;
  const auto model = CirculantModel::build(SpectralDensity::cosine(0.5, 0.2), omega);
  const auto acov = model.autocov();
  const auto domain = make_interval(omega + 1);  // extent omega
  const int n = omega + 1;
  const int r = 30000;
  std::vector<double> cov(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < r; ++i) {
    const auto x = model.sample_on_domain(domain, 31337 + static_cast<std::uint64_t>(i));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) cov[static_cast<std::size_t>(a) * n + b] += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(b)];
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double emp = cov[static_cast<std::size_t>(a) * n + b] / r;
      const double expect = acov.at({static_cast<Coord>(std::abs(a - b))});
      const double se = std::sqrt(2.0 / r) * 0.7;
      CHECK(std::abs(emp - expect) <= 4.0 * se);
    }
  }
}

TEST_CASE("sampler rejects domains larger than the window") {
  const auto model = CirculantModel::build(SpectralDensity::constant(0.5), 2);
  CHECK_THROWS_AS(model.sample_on_domain(make_interval(4), 1), std::invalid_argument);
  CHECK_NOTHROW(model.sample_on_domain(make_interval(3), 1));
}

TEST_CASE("bandlimited round trip") {
  const auto acov = autocovariance(SpectralDensity::cosine(0.5, 0.2), 1);
  // Reconstruct the density from its partial sum and recompute coefficients.
  class Reconstructed final : public DensityImpl {
   public:
    explicit Reconstructed(Autocovariance acov) : acov_(std::move(acov)) {}
    int dimension() const override { return 1; }
    double value(std::span<const double> xi) const override {
      return partial_fourier_sum(acov_, 1, xi);
    }
    std::string name() const override { return "reconstructed"; }

   private:
    Autocovariance acov_;
  };
  const SpectralDensity rebuilt(std::make_shared<Reconstructed>(acov));
  const auto round = autocovariance(rebuilt, 1);
  CHECK(round.at({0}) == doctest::Approx(acov.at({0})).epsilon(1e-8));
  CHECK(round.at({1}) == doctest::Approx(acov.at({1})).epsilon(1e-8));
}

TEST_CASE("negative circulant eigenvalues are rejected with the frequency") {
  // A valid density never triggers this; force it with a raw impl whose
  // Fourier truncation goes negative: S(xi) = 0.1 + cos(2 pi xi) is negative
  // but pointwise validation is bypassed by constructing the impl directly.
  class Spiky final : public DensityImpl {
   public:
    int dimension() const override { return 1; }
    double value(std::span<const double> xi) const override {
      return 0.1 + std::cos(2.0 * std::numbers::pi * xi[0]);
    }
    std::string name() const override { return "spiky"; }
  };
  const SpectralDensity bad(std::make_shared<Spiky>());
  CHECK_THROWS_AS(CirculantModel::build(bad, 2), NumericalError);
  try {
    CirculantModel::build(bad, 2);
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("k=(") != std::string::npos);
  }
}
