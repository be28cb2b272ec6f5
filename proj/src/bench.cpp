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

#include "mtspec/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mtspec/circulant.hpp"
#include "mtspec/errors.hpp"
#include "mtspec/fano.hpp"
#include "mtspec/rng.hpp"
#include "mtspec/tapers.hpp"

namespace mtspec {

namespace {

// Static block partition; worker results must be written to per-index slots
// so that the later sequential reduction is independent of the thread count.
void parallel_for(int total, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, total));
  if (threads == 1) {
    for (int i = 0; i < total; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

int default_c2_resolution(int dimension) {
  return dimension == 1 ? 1024 : (dimension == 2 ? 128 : 32);
}

std::string describe_domain(const AcquisitionDomain& domain) {
  return "d=" + std::to_string(domain.dimension()) +
         ",N=" + std::to_string(domain.cardinality());
}

double sup_density_value(const SpectralDensity& density) {
  const int d = density.dimension();
  const int q = d == 1 ? 4096 : (d == 2 ? 256 : 64);
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(q);
  std::vector<double> xi(d);
  double sup = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (int j = d - 1; j >= 0; --j) {
      xi[j] = static_cast<double>(rest % q) / q;
      rest /= q;
    }
    sup = std::max(sup, std::abs(density.value(xi)));
  }
  return sup;
}

}  // namespace

RiskReport run_mse_experiment(const RiskExperimentConfig& config, PointStats* point_stats) {
  const AcquisitionDomain& domain = config.domain;
  const SpectralDensity& density = config.density;
  if (density.dimension() != domain.dimension())
    throw std::invalid_argument("density dimension does not match domain");
  if (config.taper_count < 1 || config.taper_count > domain.cardinality())
    throw std::invalid_argument("taper count must be in [1, N_Omega]");
  if (config.replicates < 2) throw std::invalid_argument("need at least 2 replicates");
  if (config.oversample < 4) throw std::invalid_argument("oversample must be >= 4");

  const int d = domain.dimension();
  const double w = bandwidth_for_count(domain, config.taper_count);
  const TaperSet tapers = compute_tapers(domain, TaperConfig{w, config.taper_count});
  const int omega = std::max(1, static_cast<int>(std::ceil(domain.diameter())));
  const CirculantModel model = CirculantModel::build(density, omega);

  const int resolution = std::max(1, config.oversample * static_cast<int>(std::ceil(domain.diameter())));
  const FrequencyGrid grid(d, resolution);
  const std::size_t grid_size = static_cast<std::size_t>(grid.size());

  std::vector<double> density_on_grid(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i)
    density_on_grid[i] = density.value(grid.point(static_cast<std::int64_t>(i)));

  // Per-replicate outputs are stored by index, then reduced sequentially, so
  // the report does not depend on the worker count.
  const int r = config.replicates;
  std::vector<double> sup_sq(static_cast<std::size_t>(r));
  std::vector<std::vector<double>> grids(static_cast<std::size_t>(r));
  parallel_for(r, config.threads, [&](int i) {
    const std::uint64_t stream = splitmix64(config.seed + static_cast<std::uint64_t>(i));
    ProcessSample sample(domain, model.sample_on_domain(domain, stream));
    MtEstimate est = multitaper_estimate(sample, tapers, grid);
    double worst = 0.0;
    const auto& values = est.grid_values();
    for (std::size_t g = 0; g < grid_size; ++g)
      worst = std::max(worst, std::abs(values[g] - density_on_grid[g]));
    sup_sq[static_cast<std::size_t>(i)] = worst * worst;
    grids[static_cast<std::size_t>(i)] = est.grid_values();
  });

  RiskReport rep;
  rep.domain_spec = describe_domain(domain);
  rep.density_spec = density.name();
  rep.dimension = d;
  rep.cardinality = domain.cardinality();
  rep.perimeter = domain.digital_perimeter();
  rep.diameter = domain.diameter();
  rep.taper_count = config.taper_count;
  rep.bandwidth = w;
  rep.oversample = config.oversample;
  rep.replicates = r;
  rep.seed = config.seed;

  double mean = 0.0;
  for (double v : sup_sq) mean += v;
  mean /= r;
  double var = 0.0;
  for (double v : sup_sq) var += (v - mean) * (v - mean);
  var /= (r - 1);
  rep.mse = mean;
  rep.mse_se = std::sqrt(var / r);

  std::vector<double> point_mean(grid_size, 0.0);
  for (const auto& g : grids)
    for (std::size_t i = 0; i < grid_size; ++i) point_mean[i] += g[i];
  for (std::size_t i = 0; i < grid_size; ++i) point_mean[i] /= r;
  std::vector<double> point_var(grid_size, 0.0);
  for (const auto& g : grids)
    for (std::size_t i = 0; i < grid_size; ++i) {
      const double dv = g[i] - point_mean[i];
      point_var[i] += dv * dv;
    }
  for (std::size_t i = 0; i < grid_size; ++i) point_var[i] /= (r - 1);

  rep.bias_sup = 0.0;
  rep.variance_max = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    rep.bias_sup = std::max(rep.bias_sup, std::abs(point_mean[i] - density_on_grid[i]));
    rep.variance_max = std::max(rep.variance_max, point_var[i]);
  }

  rep.density_c2 = c2_norm(density, default_c2_resolution(d));
  rep.c2_warning = rep.density_c2 > 1.0;
  const MseBound mb = mse_bound(domain, config.taper_count);
  rep.mse_bound_value = mb.value;
  rep.precondition_met = mb.precondition_met;
  rep.bias_bound_value = bias_bound(domain, config.taper_count, rep.density_c2);
  rep.lower_rate = lower_bound_rate(domain).rate;

  if (point_stats) {
    point_stats->resolution = resolution;
    point_stats->mean = std::move(point_mean);
    point_stats->variance = std::move(point_var);
    point_stats->density_values = std::move(density_on_grid);
  }
  return rep;
}

SlopeFit fit_rate_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("rate fit needs at least 3 points");
  const int n = static_cast<int>(points.size());
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
      throw std::invalid_argument("rate fit inputs must be positive");
    lx[i] = std::log(points[i].first);
    ly[i] = std::log(points[i].second);
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("rate fit abscissae are all equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double resid = ly[i] - my - fit.slope * (lx[i] - mx);
    rss += resid * resid;
  }
  fit.half_width = n > 2 ? 2.0 * std::sqrt(rss / (n - 2) / sxx) : 0.0;
  return fit;
}

TailReport tail_check(const TailConfig& config) {
  const AcquisitionDomain& domain = config.domain;
  const SpectralDensity& density = config.density;
  if (density.dimension() != domain.dimension())
    throw std::invalid_argument("density dimension does not match domain");
  if (config.taper_count < 1 || config.taper_count > domain.cardinality())
    throw std::invalid_argument("taper count must be in [1, N_Omega]");
  if (config.replicates < 2) throw std::invalid_argument("need at least 2 replicates");
  if (config.thresholds.empty()) throw std::invalid_argument("need thresholds");
  for (std::size_t i = 0; i < config.thresholds.size(); ++i) {
    if (!(config.thresholds[i] >= 0.0))
      throw std::invalid_argument("thresholds must be nonnegative");
    if (i > 0 && config.thresholds[i] <= config.thresholds[i - 1])
      throw std::invalid_argument("thresholds must be ascending");
  }

  const int d = domain.dimension();
  const double w = bandwidth_for_count(domain, config.taper_count);
  const TaperSet tapers = compute_tapers(domain, TaperConfig{w, config.taper_count});
  const int omega = std::max(1, static_cast<int>(std::ceil(domain.diameter())));
  const CirculantModel model = CirculantModel::build(density, omega);
  const FrequencyGrid grid(d, std::max(1, 4 * omega));

  // Analytic mean of the estimator on the grid.
  const Autocovariance acov = autocovariance(density, domain.max_extent());
  const std::vector<double> mean_lags = expected_estimate_lags(tapers, acov);
  const std::vector<double> mean_values =
      evaluate_on_grid(domain.difference_set(), mean_lags, grid);

  const int r = config.replicates;
  std::vector<double> maxdev(static_cast<std::size_t>(r));
  const std::size_t grid_size = static_cast<std::size_t>(grid.size());
  parallel_for(r, config.threads, [&](int i) {
    const std::uint64_t stream = splitmix64(config.seed + static_cast<std::uint64_t>(i));
    ProcessSample sample(domain, model.sample_on_domain(domain, stream));
    MtEstimate est = multitaper_estimate(sample, tapers, grid);
    double worst = 0.0;
    for (std::size_t g = 0; g < grid_size; ++g)
      worst = std::max(worst, std::abs(est.grid_values()[g] - mean_values[g]));
    maxdev[static_cast<std::size_t>(i)] = worst;
  });

  TailReport rep;
  rep.thresholds = config.thresholds;
  rep.omega = omega;
  rep.grid_points = grid.size();
  rep.replicates = r;
  rep.seed = config.seed;
  rep.sup_density = sup_density_value(density);

  const double union_count = std::pow(static_cast<double>(omega), d);
  rep.empirical.resize(config.thresholds.size());
  rep.fitted_c = 0.0;
  for (std::size_t t = 0; t < config.thresholds.size(); ++t) {
    int count = 0;
    for (double v : maxdev) {
      if (v >= config.thresholds[t]) ++count;
    }
    rep.empirical[t] = static_cast<double>(count) / r;
    if (rep.empirical[t] > 0.0 && config.thresholds[t] > 0.0) {
      const double tt = config.thresholds[t];
      const double m = std::min(config.taper_count * tt * tt / (rep.sup_density * rep.sup_density),
                                config.taper_count * tt / rep.sup_density);
      const double denom = std::log(2.0 * union_count / rep.empirical[t]);
      if (denom > 0.0) rep.fitted_c = std::max(rep.fitted_c, m / denom);
    }
  }
  rep.bound.resize(config.thresholds.size());
  for (std::size_t t = 0; t < config.thresholds.size(); ++t) {
    const double tt = config.thresholds[t];
    if (rep.fitted_c <= 0.0) {
      rep.bound[t] = tt == 0.0 ? 2.0 * union_count : 0.0;
      continue;
    }
    const double m = std::min(config.taper_count * tt * tt / (rep.sup_density * rep.sup_density),
                              config.taper_count * tt / rep.sup_density);
    rep.bound[t] = 2.0 * union_count * std::exp(-m / rep.fitted_c);
  }
  return rep;
}

RateResult run_rate_experiment(const RateExperimentConfig& config) {
  if (config.sizes.size() < 3)
    throw std::invalid_argument("rate experiment needs at least 3 sizes");
  const SpectralDensity density = parse_density_spec(config.density_spec);
  const int d = config.family == DomainFamily::kInterval ? 1 : 2;
  if (density.dimension() != d)
    throw std::invalid_argument("density dimension does not match the domain family");

  RateResult result;
  std::vector<std::pair<double, double>> fit_points;
  for (std::size_t i = 0; i < config.sizes.size(); ++i) {
    const std::int64_t size = config.sizes[i];
    const AcquisitionDomain domain =
        config.family == DomainFamily::kInterval
            ? make_interval(size)
            : make_rectangle(std::vector<std::int64_t>{size, size});
    const double n = static_cast<double>(domain.cardinality());
    RatePoint point;
    point.size = size;
    point.rate_functional = d == 1 ? std::log(n) / n
                                   : std::log(domain.diameter()) / std::pow(n, 1.0 / d);
    point.rate_reference = d == 1 ? std::pow(point.rate_functional, 0.8)
                                  : std::pow(point.rate_functional, 4.0 / 3.0);
    if (config.synthetic_exponent) {
      point.report.domain_spec = describe_domain(domain);
      point.report.density_spec = config.density_spec;
      point.report.dimension = d;
      point.report.cardinality = domain.cardinality();
      point.report.mse = std::pow(point.rate_functional, *config.synthetic_exponent);
    } else {
      RiskExperimentConfig rc{domain, density, corollary_taper_count(domain).count,
                              config.oversample, config.replicates,
                              splitmix64(config.seed + static_cast<std::uint64_t>(i)),
                              config.threads};
      point.report = run_mse_experiment(rc);
    }
    fit_points.emplace_back(point.rate_functional, point.report.mse);
    result.points.push_back(std::move(point));
  }
  result.fit = fit_rate_slope(fit_points);
  return result;
}

}  // namespace mtspec
