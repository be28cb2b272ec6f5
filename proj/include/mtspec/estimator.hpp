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

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "mtspec/density.hpp"
#include "mtspec/domain.hpp"
#include "mtspec/tapers.hpp"

namespace mtspec {

/// One realization of the process restricted to a domain, values in the
/// domain's canonical point order. All values must be finite.
struct ProcessSample {
  ProcessSample(AcquisitionDomain domain, std::vector<double> values);
  AcquisitionDomain domain;
  std::vector<double> values;
};

/// Uniform product grid on [0,1)^d with `resolution` points per axis:
/// coordinates j/resolution, row-major indexing.
struct FrequencyGrid {
  FrequencyGrid(int dimension, int resolution);
  int dimension;
  int resolution;
  std::int64_t size() const;
  std::vector<double> point(std::int64_t index) const;
};

/// Multi-taper estimate as a trigonometric polynomial: coefficients over the
/// lag set (Omega - Omega) plus cached evaluations on a frequency grid.
class MtEstimate {
 public:
  MtEstimate(int degree, std::vector<Point> lags, std::vector<double> coefficients,
             FrequencyGrid grid, std::vector<double> grid_values);

  int dimension() const { return grid_.dimension; }
  /// Maximum component degree, ceil(diam(Omega)).
  int degree() const { return degree_; }
  const std::vector<Point>& lags() const { return lags_; }
  const std::vector<double>& lag_coefficients() const { return coefficients_; }
  const FrequencyGrid& grid() const { return grid_; }
  const std::vector<double>& grid_values() const { return grid_values_; }

  /// Exact trig-polynomial evaluation at an arbitrary frequency.
  double value_at(std::span<const double> xi) const;

 private:
  int degree_;
  std::vector<Point> lags_;
  std::vector<double> coefficients_;
  FrequencyGrid grid_;
  std::vector<double> grid_values_;
};

enum class GridEval { kAuto, kDirect, kFft };

/// Evaluates sum_l c_l e^{-2 pi i <xi, l>} on a uniform grid. The FFT path
/// wraps lags modulo the grid resolution and matches the direct sum exactly
/// (boths paths are exact evaluations of the same polynomial).
std::vector<double> evaluate_on_grid(const std::vector<Point>& lags,
                                     const std::vector<double>& coefficients,
                                     const FrequencyGrid& grid, GridEval path = GridEval::kAuto);

/// The averaged tapered periodogram over the given grid, with lag
/// coefficients computed from the rewritten double-sum form.
MtEstimate multitaper_estimate(const ProcessSample& sample, const TaperSet& tapers,
                               const FrequencyGrid& grid);

/// Direct single-frequency evaluation (1/K) sum_k |sum_n X_n nu_n e^{-2 pi i <xi,n>}|^2.
double estimate_at(const ProcessSample& sample, const TaperSet& tapers,
                   std::span<const double> xi);

/// Expected lag coefficients of the estimator under the given autocovariance:
/// E sigma_hat_l = sigma_l * h_l with h the averaged taper autocorrelation.
/// Returned in the order of domain.difference_set().
std::vector<double> expected_estimate_lags(const TaperSet& tapers, const Autocovariance& acov);

/// The Hermitian matrix V_K(xi) with (V_K)_{n,m} =
/// e^{-2 pi i <xi, n-m>} (1/K) sum_k nu_n nu_m, so that <V_K X, X> equals the
/// estimator at xi. Frobenius norm 1/sqrt(K), spectral norm <= 1/K.
Eigen::MatrixXcd quadratic_form_matrix(const TaperSet& tapers, std::span<const double> xi);

/// Max over an (oversample * degree)^d grid of |S(xi) - estimate(xi)|;
/// a grid approximation of the sup distance (oversample >= 4).
double sup_norm_distance(const SpectralDensity& density, const MtEstimate& estimate,
                         int oversample);

/// Bias shape bound (constants set to 1):
/// c2 * [ (K/N)^{2/d} + N_b/(N^{1-1/d} K^{1/d}) * (1 + log(N/N_b)) ].
double bias_bound(const AcquisitionDomain& domain, int taper_count, double c2);

struct MseBound {
  double value = 0.0;
  double variance_term = 0.0;       // max_p (log(diam)/K)^p
  double bias_smooth_term = 0.0;    // (K/N)^{4/d}
  double bias_boundary_term = 0.0;  // perimeter term, squared log factor
  bool precondition_met = false;    // N_b >= (N/K)^{1-1/d}
};

/// Mean-squared-error shape bound, the three-term sum with constants 1.
/// Requires N_Omega >= 3.
MseBound mse_bound(const AcquisitionDomain& domain, int taper_count);

struct CorollaryTaperCount {
  int count = 0;
  bool clamped = false;            // hit the [1, N_Omega] clamp
  bool diameter_condition_ok = false;  // diam <= exp(N^{1/d})
};

/// Rate-optimal taper count: ceil((log(diam) N^4)^{1/5}) for d = 1,
/// ceil((log(diam)^d N^2)^{1/3}) for d >= 2, clamped to [1, N_Omega].
/// Requires diam > 1.
CorollaryTaperCount corollary_taper_count(const AcquisitionDomain& domain);

}  // namespace mtspec
