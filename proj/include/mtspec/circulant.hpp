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

#include <complex>
#include <cstdint>
#include <vector>

#include "mtspec/density.hpp"
#include "mtspec/domain.hpp"

namespace mtspec {

/// Stationary Gaussian model on the torus {-omega..omega}^d whose circulant
/// covariance (Sigma_Y)_{n,m} = sigma_{u(n-m)} (u the componentwise wrap into
/// {0..omega}) is diagonalized by the discrete Fourier basis with eigenvalues
/// F_omega(S)(k/(2*omega+1)). Restricting a sample to any translate of
/// {0..omega}^d reproduces the law of the process on that window, which makes
/// the model an exact sampler for acquisition domains of extent <= omega.
class CirculantModel {
 public:
  /// Builds the model for the density, wrapping lags up to omega.
  /// Throws NumericalError naming the offending frequency if an eigenvalue
  /// is below -1e-10; values in [-1e-10, 0) are clamped to 0.
  static CirculantModel build(const SpectralDensity& density, int omega);

  int dimension() const { return dimension_; }
  int omega() const { return omega_; }
  /// (2*omega+1)^d, the torus size.
  std::int64_t grid_size() const { return static_cast<std::int64_t>(eigenvalues_.size()); }

  /// Eigenvalues in row-major FFT index order (index j per axis corresponds
  /// to frequency k = j <= omega ? j : j - (2*omega+1)).
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  /// Eigenvalue at an explicit frequency k with ||k||_inf <= omega.
  double eigenvalue_at(const Point& k) const;

  const Autocovariance& autocov() const { return autocov_; }
  const SpectralDensity& density() const { return density_; }

  /// Covariance entry sigma_{u(n-m)} for n, m in {-omega..omega}^d.
  double covariance(const Point& n, const Point& m) const;

  /// Draws one sample of Y on the torus window {-omega..omega}^d, row-major
  /// in FFT index order. Output is real by Hermitian pairing of the k and -k
  /// Gaussian draws; the residual imaginary part is checked against 1e-8.
  /// Draw order: frequencies are visited in row-major FFT order, one N(0,1)
  /// draw for k = 0, two (real, imag) for each lexicographically positive k.
  std::vector<double> sample(std::uint64_t seed) const;

  /// Sample restricted to a domain: values in canonical point order.
  /// The domain must fit in a translate of {0..omega}^d.
  std::vector<double> sample_on_domain(const AcquisitionDomain& domain, std::uint64_t seed) const;

 private:
  CirculantModel(SpectralDensity density, Autocovariance autocov, int omega,
                 std::vector<double> eigenvalues);

  SpectralDensity density_;
  Autocovariance autocov_;
  int dimension_;
  int omega_;
  std::vector<double> eigenvalues_;
};

}  // namespace mtspec
