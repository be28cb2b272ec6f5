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

#include "mtspec/density.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mtspec/errors.hpp"
#include "mtspec/fano.hpp"
#include "mtspec/fft.hpp"

namespace mtspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

class ConstantDensity final : public DensityImpl {
 public:
  ConstantDensity(double c, int dimension) : c_(c), dimension_(dimension) {}
  int dimension() const override { return dimension_; }
  double value(std::span<const double>) const override { return c_; }
  bool has_derivatives() const override { return true; }
  void gradient(std::span<const double>, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
  }
  void hessian(std::span<const double>, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
  }
  std::string name() const override {
    return dimension_ == 1 ? "constant(" + fmt(c_) + ")"
                           : "constant(" + fmt(c_) + "," + std::to_string(dimension_) + ")";
  }

 private:
  double c_;
  int dimension_;
};

class CosineDensity final : public DensityImpl {
 public:
  CosineDensity(double c, double a) : c_(c), a_(a) {}
  int dimension() const override { return 1; }
  double value(std::span<const double> xi) const override {
    return c_ + a_ * std::cos(kTwoPi * xi[0]);
  }
  bool has_derivatives() const override { return true; }
  void gradient(std::span<const double> xi, std::span<double> out) const override {
    out[0] = -a_ * kTwoPi * std::sin(kTwoPi * xi[0]);
  }
  void hessian(std::span<const double> xi, std::span<double> out) const override {
    out[0] = -a_ * kTwoPi * kTwoPi * std::cos(kTwoPi * xi[0]);
  }
  std::string name() const override { return "cosine(" + fmt(c_) + "," + fmt(a_) + ")"; }

 private:
  double c_;
  double a_;
};

}  // namespace

void DensityImpl::gradient(std::span<const double>, std::span<double>) const {
  throw std::logic_error("density does not provide derivatives");
}

void DensityImpl::hessian(std::span<const double>, std::span<double>) const {
  throw std::logic_error("density does not provide derivatives");
}

SpectralDensity::SpectralDensity(std::shared_ptr<const DensityImpl> impl)
    : impl_(std::move(impl)) {
  if (!impl_) throw std::invalid_argument("null density impl");
  name_ = impl_->name();
}

void SpectralDensity::gradient(std::span<const double> xi, std::span<double> out) const {
  impl_->gradient(xi, out);
}

void SpectralDensity::hessian(std::span<const double> xi, std::span<double> out) const {
  impl_->hessian(xi, out);
}

SpectralDensity SpectralDensity::constant(double c, int dimension) {
  if (!(c >= 0.0)) throw std::invalid_argument("constant density level must be >= 0");
  if (dimension < 1) throw std::invalid_argument("density dimension must be >= 1");
  return SpectralDensity(std::make_shared<ConstantDensity>(c, dimension));
}

SpectralDensity SpectralDensity::cosine(double c, double a) {
  if (c - std::abs(a) < 0.0)
    throw std::invalid_argument("cosine density is negative: need |a| <= c");
  return SpectralDensity(std::make_shared<CosineDensity>(c, a));
}

Autocovariance::Autocovariance(int dimension, int max_lag, std::vector<double> values)
    : dimension_(dimension), max_lag_(max_lag), values_(std::move(values)) {
  std::size_t expect = 1;
  for (int j = 0; j < dimension; ++j) expect *= static_cast<std::size_t>(2 * max_lag + 1);
  if (dimension < 1 || max_lag < 0 || values_.size() != expect)
    throw std::invalid_argument("autocovariance shape mismatch");
}

double Autocovariance::at(const Point& lag) const {
  if (static_cast<int>(lag.size()) != dimension_)
    throw std::invalid_argument("lag arity mismatch");
  const int side = 2 * max_lag_ + 1;
  std::size_t idx = 0;
  for (int j = 0; j < dimension_; ++j) {
    if (lag[j] < -max_lag_ || lag[j] > max_lag_)
      throw std::invalid_argument("lag outside autocovariance range");
    idx = idx * side + static_cast<std::size_t>(lag[j] + max_lag_);
  }
  return values_[idx];
}

int default_autocov_resolution(int dimension, int max_lag) {
  int base = dimension == 1 ? 4096 : (dimension == 2 ? 512 : 128);
  int need = 8 * max_lag + 1;
  if (need % 2) ++need;
  return std::max(base, need);
}

Autocovariance autocovariance(const SpectralDensity& density, int max_lag, int resolution) {
  const int d = density.dimension();
  if (max_lag < 0) throw std::invalid_argument("max_lag must be >= 0");
  const int q = resolution > 0 ? resolution : default_autocov_resolution(d, max_lag);
  if (q < 2 * max_lag + 1) throw std::invalid_argument("quadrature resolution below Nyquist");

  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(q);
  fft::Buffer buf(total);
  std::vector<double> xi(d);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (int j = d - 1; j >= 0; --j) {
      idx[j] = rest % q;
      rest /= q;
    }
    for (int j = 0; j < d; ++j) xi[j] = static_cast<double>(idx[j]) / q;
    buf[i] = density.value(xi);
  }
  fft::transform(std::vector<int>(d, q), buf, fft::kForward);

  const int side = 2 * max_lag + 1;
  std::size_t count = 1;
  for (int j = 0; j < d; ++j) count *= static_cast<std::size_t>(side);
  std::vector<double> out(count);
  const double scale = 1.0 / static_cast<double>(total);
  double max_imag = 0.0;
  Point lag(d);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t rest = i;
    for (int j = d - 1; j >= 0; --j) {
      lag[j] = static_cast<Coord>(rest % side) - max_lag;
      rest /= side;
    }
    std::size_t src = 0;
    for (int j = 0; j < d; ++j) {
      const int wrapped = ((lag[j] % q) + q) % q;
      src = src * q + static_cast<std::size_t>(wrapped);
    }
    const std::complex<double> v = buf[src] * scale;
    max_imag = std::max(max_imag, std::abs(v.imag()));
    out[i] = v.real();
  }
  if (max_imag >= 1e-10)
    throw NumericalError("autocovariance imaginary residue " + std::to_string(max_imag) +
                         " exceeds 1e-10: density is not even");
  return Autocovariance(d, max_lag, std::move(out));
}

namespace {

// Evaluates |value|, all |d_j|, all |d_j d_k| at xi, via analytic derivatives
// or central finite differences (step 1e-4).
double c2_local_max(const SpectralDensity& s, std::vector<double>& xi) {
  const int d = s.dimension();
  double m = std::abs(s.value(xi));
  if (s.has_derivatives()) {
    std::vector<double> g(d), h(static_cast<std::size_t>(d) * d);
    s.gradient(xi, g);
    s.hessian(xi, h);
    for (double v : g) m = std::max(m, std::abs(v));
    for (double v : h) m = std::max(m, std::abs(v));
    return m;
  }
  const double h = 1e-4;
  const double f0 = s.value(xi);
  for (int j = 0; j < d; ++j) {
    const double xj = xi[j];
    xi[j] = xj + h;
    const double fp = s.value(xi);
    xi[j] = xj - h;
    const double fm = s.value(xi);
    xi[j] = xj;
    m = std::max(m, std::abs((fp - fm) / (2 * h)));
    m = std::max(m, std::abs((fp - 2 * f0 + fm) / (h * h)));
    for (int k = j + 1; k < d; ++k) {
      const double xk = xi[k];
      xi[j] = xj + h; xi[k] = xk + h;
      const double fpp = s.value(xi);
      xi[k] = xk - h;
      const double fpm = s.value(xi);
      xi[j] = xj - h; xi[k] = xk + h;
      const double fmp = s.value(xi);
      xi[k] = xk - h;
      const double fmm = s.value(xi);
      xi[j] = xj; xi[k] = xk;
      m = std::max(m, std::abs((fpp - fpm - fmp + fmm) / (4 * h * h)));
    }
  }
  return m;
}

}  // namespace

double c2_norm(const SpectralDensity& density, int resolution) {
  if (resolution < 1) throw std::invalid_argument("c2_norm resolution must be >= 1");
  const int d = density.dimension();
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(resolution);
  std::vector<double> xi(d);
  double m = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (int j = d - 1; j >= 0; --j) {
      xi[j] = static_cast<double>(rest % resolution) / resolution;
      rest /= resolution;
    }
    m = std::max(m, c2_local_max(density, xi));
  }
  return m;
}

double partial_fourier_sum(const Autocovariance& acov, int p, std::span<const double> xi) {
  const int d = acov.dimension();
  if (p < 0) throw std::invalid_argument("partial sum order must be >= 0");
  if (p > acov.max_lag())
    throw std::invalid_argument("partial sum order exceeds available lags");
  if (static_cast<int>(xi.size()) != d) throw std::invalid_argument("xi arity mismatch");
  std::complex<double> sum = 0.0;
  Point k(d, -static_cast<Coord>(p));
  while (true) {
    double phase = 0.0;
    for (int j = 0; j < d; ++j) phase += xi[j] * k[j];
    sum += acov.at(k) * std::polar(1.0, kTwoPi * phase);
    int axis = d - 1;
    while (axis >= 0) {
      if (k[axis] < p) {
        ++k[axis];
        break;
      }
      k[axis] = -static_cast<Coord>(p);
      --axis;
    }
    if (axis < 0) break;
  }
  if (std::abs(sum.imag()) >= 1e-10)
    throw NumericalError("partial Fourier sum has imaginary residue " +
                         std::to_string(std::abs(sum.imag())) + ": asymmetric coefficients");
  return sum.real();
}

double partial_fourier_sum(const SpectralDensity& density, int p, std::span<const double> xi) {
  return partial_fourier_sum(autocovariance(density, p), p, xi);
}

void validate_density(const SpectralDensity& density, int resolution) {
  const int d = density.dimension();
  const int q = resolution > 0 ? resolution : (d <= 2 ? 1024 : 64);
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(q);
  std::vector<double> xi(d), mirrored(d);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (int j = d - 1; j >= 0; --j) {
      xi[j] = static_cast<double>(rest % q) / q;
      rest /= q;
    }
    const double v = density.value(xi);
    if (!(v >= -1e-12))
      throw std::invalid_argument("density is negative (" + std::to_string(v) + ") at a grid point");
    for (int j = 0; j < d; ++j) mirrored[j] = xi[j] == 0.0 ? 0.0 : 1.0 - xi[j];
    if (std::abs(density.value(mirrored) - v) > 1e-9)
      throw std::invalid_argument("density is not even: S(-xi) != S(xi)");
  }
}

SpectralDensity parse_density_spec(const std::string& spec) {
  const auto open = spec.find('(');
  const auto close = spec.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("malformed density spec '" + spec + "'");
  const std::string name = spec.substr(0, open);
  std::vector<double> args;
  {
    std::stringstream ss(spec.substr(open + 1, close - open - 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        args.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric argument in density spec '" + spec + "'");
      }
    }
  }
  SpectralDensity out = [&]() -> SpectralDensity {
    if (name == "constant") {
      if (args.empty() || args.size() > 2)
        throw std::invalid_argument("constant(c[,d]) takes 1-2 arguments");
      return SpectralDensity::constant(args[0],
                                       args.size() == 2 ? static_cast<int>(args[1]) : 1);
    }
    if (name == "cosine") {
      if (args.size() != 2) throw std::invalid_argument("cosine(c,a) takes two arguments");
      return SpectralDensity::cosine(args[0], args[1]);
    }
    if (name == "fano") {
      if (args.size() != 4) throw std::invalid_argument("fano(d,M,tau,n) takes four arguments");
      const int d = static_cast<int>(args[0]);
      const int m = static_cast<int>(args[1]);
      const int n = static_cast<int>(args[3]);
      const FanoClass cls = build_fano_class(d, m, args[2]);
      return cls.density(n);
    }
    throw std::invalid_argument("unknown density spec '" + spec + "'");
  }();
  const int check = out.dimension() <= 2 ? 256 : 32;
  validate_density(out, check);
  return out;
}

}  // namespace mtspec
