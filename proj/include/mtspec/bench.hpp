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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtspec/density.hpp"
#include "mtspec/domain.hpp"
#include "mtspec/estimator.hpp"

namespace mtspec {

struct RiskExperimentConfig {
  AcquisitionDomain domain;
  SpectralDensity density;
  int taper_count = 0;
  int oversample = 4;      // error grid has oversample * ceil(diam) points per axis
  int replicates = 0;      // >= 2
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Monte Carlo risk summary for one (domain, density, K) configuration.
/// Replicate r draws from the exact circulant sampler with the stream seed
/// splitmix64(seed + r); results are independent of the thread count.
struct RiskReport {
  std::string domain_spec;
  std::string density_spec;
  int dimension = 0;
  std::int64_t cardinality = 0;
  std::int64_t perimeter = 0;
  double diameter = 0.0;
  int taper_count = 0;
  double bandwidth = 0.0;
  int oversample = 4;
  int replicates = 0;
  std::uint64_t seed = 0;
  double mse = 0.0;          // mean over replicates of sup-norm error squared
  double mse_se = 0.0;       // MC standard error of the mean
  double bias_sup = 0.0;     // sup over grid of |mean estimate - S|
  double variance_max = 0.0; // max over grid of the per-point sample variance
  double mse_bound_value = 0.0;
  double bias_bound_value = 0.0;
  double lower_rate = 0.0;
  bool precondition_met = false;  // Theorem precondition on the perimeter
  double density_c2 = 0.0;
  bool c2_warning = false;  // density c2 norm exceeds 1
};

/// Per-grid-point Monte Carlo statistics (optional output).
struct PointStats {
  int resolution = 0;
  std::vector<double> mean;
  std::vector<double> variance;  // sample variance, ddof = 1
  std::vector<double> density_values;
};

RiskReport run_mse_experiment(const RiskExperimentConfig& config,
                              PointStats* point_stats = nullptr);

struct SlopeFit {
  double slope = 0.0;
  double half_width = 0.0;  // 2 x standard error of the slope
};

/// Least-squares slope of log(y) against log(x). Requires >= 3 points with
/// positive coordinates.
SlopeFit fit_rate_slope(const std::vector<std::pair<double, double>>& points);

struct TailConfig {
  AcquisitionDomain domain;
  SpectralDensity density;
  int taper_count = 0;
  std::vector<double> thresholds;  // positive, ascending
  int replicates = 0;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Empirical tail of max_l |S_hat(xi_l) - E S_hat(xi_l)| over the 4w grid,
/// against the quadratic-form tail bound
/// 2 w^d exp[-(1/C) min(K t^2 / ||S||_inf^2, K t / ||S||_inf)]
/// with C fitted as the smallest constant making the bound dominate every
/// empirical point.
struct TailReport {
  std::vector<double> thresholds;
  std::vector<double> empirical;  // P(max >= t)
  std::vector<double> bound;      // at the fitted constant
  double fitted_c = 0.0;
  double sup_density = 0.0;
  int omega = 0;
  std::int64_t grid_points = 0;
  int replicates = 0;
  std::uint64_t seed = 0;
};

TailReport tail_check(const TailConfig& config);

enum class DomainFamily { kInterval, kSquare };

struct RateExperimentConfig {
  DomainFamily family = DomainFamily::kInterval;
  std::vector<std::int64_t> sizes;  // interval lengths or square sides, >= 3 entries
  std::string density_spec;
  int oversample = 4;
  int replicates = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Plumbing self-check: when set, MSE values are injected as u^p instead of
  /// running Monte Carlo, so the fitted slope must echo p.
  std::optional<double> synthetic_exponent;
};

struct RatePoint {
  std::int64_t size = 0;
  double rate_functional = 0.0;  // u: log(N)/N for d=1, log(diam)/N^{1/d} for d>=2
  double rate_reference = 0.0;   // u^{4/5} for d=1, u^{4/3} for d>=2
  RiskReport report;
};

struct RateResult {
  std::vector<RatePoint> points;
  SlopeFit fit;  // slope of log MSE against log u
};

RateResult run_rate_experiment(const RateExperimentConfig& config);

}  // namespace mtspec
