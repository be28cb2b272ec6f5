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

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mtspec/domain.hpp"

namespace mtspec {

/// Backend of a spectral density. Implementations must be 1-periodic per axis
/// and even; analytic families provide closed-form derivatives.
class DensityImpl {
 public:
  virtual ~DensityImpl() = default;
  virtual int dimension() const = 0;
  virtual double value(std::span<const double> xi) const = 0;
  virtual bool has_derivatives() const { return false; }
  /// First partials, out has d entries. Only called when has_derivatives().
  virtual void gradient(std::span<const double> xi, std::span<double> out) const;
  /// Second partials, row-major d x d. Only called when has_derivatives().
  virtual void hessian(std::span<const double> xi, std::span<double> out) const;
  virtual std::string name() const = 0;
};

/// A spectral density on the torus [0,1)^d: the Fourier series of the
/// autocovariance sequence. Value semantics over a shared immutable impl.
class SpectralDensity {
 public:
  explicit SpectralDensity(std::shared_ptr<const DensityImpl> impl);

  int dimension() const { return impl_->dimension(); }
  double value(std::span<const double> xi) const { return impl_->value(xi); }
  double value1(double xi) const { return impl_->value({&xi, 1}); }
  bool has_derivatives() const { return impl_->has_derivatives(); }
  void gradient(std::span<const double> xi, std::span<double> out) const;
  void hessian(std::span<const double> xi, std::span<double> out) const;
  const std::string& name() const { return name_; }

  static SpectralDensity constant(double c, int dimension = 1);
  /// c + a*cos(2 pi xi), d=1. Autocovariance: sigma_0 = c, sigma_{+-1} = a/2.
  static SpectralDensity cosine(double c, double a);

 private:
  std::shared_ptr<const DensityImpl> impl_;
  std::string name_;
};

/// Autocovariance coefficients sigma_n on the cube {-max_lag..max_lag}^d,
/// stored row-major with index (n_j + max_lag) per axis.
class Autocovariance {
 public:
  Autocovariance(int dimension, int max_lag, std::vector<double> values);

  int dimension() const { return dimension_; }
  int max_lag() const { return max_lag_; }
  /// sigma at the given lag; lags with any |n_j| > max_lag are out of range.
  double at(const Point& lag) const;
  const std::vector<double>& values() const { return values_; }

 private:
  int dimension_;
  int max_lag_;
  std::vector<double> values_;
};

/// Per-axis quadrature resolution used by autocovariance(): the per-dimension
/// default (4096 / 512 / 128 for d = 1 / 2 / >=3) raised to at least
/// 8*max_lag, rounded up to even.
int default_autocov_resolution(int dimension, int max_lag);

/// sigma_n = integral of S(xi) e^{-2 pi i <xi,n>} over [0,1]^d, by trapezoidal
/// quadrature on a uniform grid (resolution points per axis; 0 = default).
/// Throws NumericalError if the imaginary residue exceeds 1e-10 (the density
/// is not even).
Autocovariance autocovariance(const SpectralDensity& density, int max_lag, int resolution = 0);

/// Max over a uniform grid of |S|, all |d_j S|, and all |d_j d_k S|.
/// Uses analytic derivatives when available, otherwise central finite
/// differences with step 1e-4.
double c2_norm(const SpectralDensity& density, int resolution);

/// F_p(S)(xi): the partial Fourier sum over ||k||_inf <= p. The overload
/// taking a density computes the needed coefficients first. Throws
/// NumericalError if the imaginary part of the sum exceeds 1e-10.
double partial_fourier_sum(const Autocovariance& acov, int p, std::span<const double> xi);
double partial_fourier_sum(const SpectralDensity& density, int p, std::span<const double> xi);

/// Registry: "constant(c)", "cosine(c,a)", "fano(d,M,tau,n)".
/// The returned density has been validated (nonnegative on a check grid,
/// even to tolerance).
SpectralDensity parse_density_spec(const std::string& spec);

/// Checks value >= 0 and evenness on a uniform grid (resolution 0 picks
/// 1024 per axis for d <= 2, 64 for d >= 3). Throws on violation.
void validate_density(const SpectralDensity& density, int resolution = 0);

}  // namespace mtspec
