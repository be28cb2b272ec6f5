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

#include "mtspec/circulant.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "mtspec/errors.hpp"
#include "mtspec/fft.hpp"
#include "mtspec/rng.hpp"

namespace mtspec {

namespace {

// Unfolds a row-major FFT index into the frequency vector k in {-w..w}^d.
Point unfold(std::size_t idx, int d, int side, int w) {
  Point k(d);
  for (int j = d - 1; j >= 0; --j) {
    const int v = static_cast<int>(idx % side);
    k[j] = static_cast<Coord>(v <= w ? v : v - side);
    idx /= side;
  }
  return k;
}

bool lex_positive(const Point& k) {
  for (Coord c : k) {
    if (c > 0) return true;
    if (c < 0) return false;
  }
  return false;
}

}  // namespace

CirculantModel::CirculantModel(SpectralDensity density, Autocovariance autocov, int omega,
                               std::vector<double> eigenvalues)
    : density_(std::move(density)),
      autocov_(std::move(autocov)),
      dimension_(autocov_.dimension()),
      omega_(omega),
      eigenvalues_(std::move(eigenvalues)) {}

CirculantModel CirculantModel::build(const SpectralDensity& density, int omega) {
  if (omega < 1) throw std::invalid_argument("circulant half-width omega must be >= 1");
  const int d = density.dimension();
  const int side = 2 * omega + 1;
  Autocovariance acov = autocovariance(density, omega);

  // F_omega(S) at k/(2w+1) is the unnormalized backward DFT of the wrapped
  // coefficient cube; exact because F_omega has degree omega < side.
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(side);
  fft::Buffer buf(total);
  {
    const int aside = 2 * acov.max_lag() + 1;
    const auto& vals = acov.values();
    Point lag(d);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      std::size_t rest = i;
      for (int j = d - 1; j >= 0; --j) {
        lag[j] = static_cast<Coord>(rest % aside) - acov.max_lag();
        rest /= aside;
      }
      std::size_t dst = 0;
      for (int j = 0; j < d; ++j) {
        const int wrapped = ((lag[j] % side) + side) % side;
        dst = dst * side + static_cast<std::size_t>(wrapped);
      }
      buf[dst] += vals[i];
    }
  }
  fft::transform(std::vector<int>(d, side), buf, fft::kBackward);

  std::vector<double> eig(total);
  for (std::size_t i = 0; i < total; ++i) {
    double v = buf[i].real();
    if (v < -1e-10) {
      const Point k = unfold(i, d, side, omega);
      std::string ks;
      for (int j = 0; j < d; ++j) ks += (j ? "," : "") + std::to_string(k[j]);
      throw NumericalError("circulant model not samplable: eigenvalue " + std::to_string(v) +
                           " at frequency k=(" + ks + ")");
    }
    eig[i] = v < 0.0 ? 0.0 : v;
  }
  return CirculantModel(density, std::move(acov), omega, std::move(eig));
}

double CirculantModel::eigenvalue_at(const Point& k) const {
  if (static_cast<int>(k.size()) != dimension_) throw std::invalid_argument("frequency arity mismatch");
  const int side = 2 * omega_ + 1;
  std::size_t idx = 0;
  for (int j = 0; j < dimension_; ++j) {
    if (k[j] < -omega_ || k[j] > omega_)
      throw std::invalid_argument("frequency outside {-omega..omega}^d");
    idx = idx * side + static_cast<std::size_t>(((k[j] % side) + side) % side);
  }
  return eigenvalues_[idx];
}

double CirculantModel::covariance(const Point& n, const Point& m) const {
  if (static_cast<int>(n.size()) != dimension_ || static_cast<int>(m.size()) != dimension_)
    throw std::invalid_argument("point arity mismatch");
  Point lag(dimension_);
  for (int j = 0; j < dimension_; ++j) {
    int diff = std::abs(n[j] - m[j]);
    if (diff > 2 * omega_) throw std::invalid_argument("points outside the torus window");
    if (diff > omega_) diff = 2 * omega_ + 1 - diff;  // wrap branch
    lag[j] = static_cast<Coord>(diff);
  }
  return autocov_.at(lag);
}

std::vector<double> CirculantModel::sample(std::uint64_t seed) const {
  const int d = dimension_;
  const int side = 2 * omega_ + 1;
  const std::size_t total = eigenvalues_.size();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Z_k = sqrt(lambda_k) eta_k with eta Hermitian (eta_{-k} = conj(eta_k),
  // eta_0 real); then Y = U* Z is real with covariance Sigma_Y.
  fft::Buffer z(total);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < total; ++i) {
    const Point k = unfold(i, d, side, omega_);
    bool zero = true;
    for (Coord c : k) zero = zero && c == 0;
    if (zero) {
      z[i] = std::sqrt(eigenvalues_[i]) * normal(rng);
    } else if (lex_positive(k)) {
      const double g1 = normal(rng);
      const double g2 = normal(rng);
      std::size_t conj_idx = 0;
      for (int j = 0; j < d; ++j) {
        const int neg = ((-k[j] % side) + side) % side;
        conj_idx = conj_idx * side + static_cast<std::size_t>(neg);
      }
      const double amp = std::sqrt(eigenvalues_[i]) * inv_sqrt2;
      const double amp_c = std::sqrt(eigenvalues_[conj_idx]) * inv_sqrt2;
      z[i] = std::complex<double>(amp * g1, amp * g2);
      z[conj_idx] = std::complex<double>(amp_c * g1, -amp_c * g2);
    }
  }
  fft::transform(std::vector<int>(d, side), z, fft::kForward);

  std::vector<double> out(total);
  const double scale = 1.0 / std::pow(static_cast<double>(side), d / 2.0);
  double max_imag = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    max_imag = std::max(max_imag, std::abs(z[i].imag()) * scale);
    out[i] = z[i].real() * scale;
  }
  if (max_imag >= 1e-8)
    throw NumericalError("sampler output has imaginary residue " + std::to_string(max_imag) +
                         ": conjugate pairing violated");
  return out;
}

std::vector<double> CirculantModel::sample_on_domain(const AcquisitionDomain& domain,
                                                     std::uint64_t seed) const {
  if (domain.dimension() != dimension_)
    throw std::invalid_argument("domain dimension does not match model");
  if (domain.max_extent() > omega_)
    throw std::invalid_argument("domain extent exceeds the sampler window; increase omega");
  const std::vector<double> window = sample(seed);
  const int side = 2 * omega_ + 1;
  const Point& origin = domain.min_corner();
  std::vector<double> out;
  out.reserve(domain.points().size());
  for (const Point& p : domain.points()) {
    std::size_t idx = 0;
    for (int j = 0; j < dimension_; ++j)
      idx = idx * side + static_cast<std::size_t>(p[j] - origin[j]);  // offsets in {0..omega}
    out.push_back(window[idx]);
  }
  return out;
}

}  // namespace mtspec
