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

#include "mtspec/estimator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mtspec/errors.hpp"
#include "mtspec/fft.hpp"

namespace mtspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int degree_of(const AcquisitionDomain& domain) {
  return static_cast<int>(std::ceil(domain.diameter()));
}

std::size_t wrap_index(const Point& lag, int resolution, int d) {
  std::size_t idx = 0;
  for (int j = 0; j < d; ++j) {
    const int w = ((lag[j] % resolution) + resolution) % resolution;
    idx = idx * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(w);
  }
  return idx;
}

}  // namespace

ProcessSample::ProcessSample(AcquisitionDomain domain_in, std::vector<double> values_in)
    : domain(std::move(domain_in)), values(std::move(values_in)) {
  if (static_cast<std::int64_t>(values.size()) != domain.cardinality())
    throw std::invalid_argument("sample length " + std::to_string(values.size()) +
                                " does not match domain cardinality " +
                                std::to_string(domain.cardinality()));
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("sample contains a non-finite value");
  }
}

FrequencyGrid::FrequencyGrid(int dimension_in, int resolution_in)
    : dimension(dimension_in), resolution(resolution_in) {
  if (dimension < 1) throw std::invalid_argument("grid dimension must be >= 1");
  if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
}

std::int64_t FrequencyGrid::size() const {
  std::int64_t s = 1;
  for (int j = 0; j < dimension; ++j) s *= resolution;
  return s;
}

std::vector<double> FrequencyGrid::point(std::int64_t index) const {
  std::vector<double> xi(dimension);
  for (int j = dimension - 1; j >= 0; --j) {
    xi[j] = static_cast<double>(index % resolution) / resolution;
    index /= resolution;
  }
  return xi;
}

MtEstimate::MtEstimate(int degree, std::vector<Point> lags, std::vector<double> coefficients,
                       FrequencyGrid grid, std::vector<double> grid_values)
    : degree_(degree),
      lags_(std::move(lags)),
      coefficients_(std::move(coefficients)),
      grid_(grid),
      grid_values_(std::move(grid_values)) {
  if (lags_.size() != coefficients_.size())
    throw std::invalid_argument("lag/coefficient length mismatch");
  if (static_cast<std::int64_t>(grid_values_.size()) != grid_.size())
    throw std::invalid_argument("grid value length mismatch");
}

double MtEstimate::value_at(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != grid_.dimension)
    throw std::invalid_argument("xi arity mismatch");
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < lags_.size(); ++i) {
    double phase = 0.0;
    for (int j = 0; j < grid_.dimension; ++j) phase += xi[j] * lags_[i][j];
    sum += coefficients_[i] * std::polar(1.0, -kTwoPi * phase);
  }
  return sum.real();
}

std::vector<double> evaluate_on_grid(const std::vector<Point>& lags,
                                     const std::vector<double>& coefficients,
                                     const FrequencyGrid& grid, GridEval path) {
  if (lags.size() != coefficients.size())
    throw std::invalid_argument("lag/coefficient length mismatch");
  const int d = grid.dimension;
  const std::int64_t total = grid.size();
  if (path == GridEval::kAuto) {
    const std::int64_t direct_cost = total * static_cast<std::int64_t>(lags.size());
    path = direct_cost <= (std::int64_t{1} << 22) ? GridEval::kDirect : GridEval::kFft;
  }
  std::vector<double> out(static_cast<std::size_t>(total));
  if (path == GridEval::kDirect) {
    for (std::int64_t i = 0; i < total; ++i) {
      const std::vector<double> xi = grid.point(i);
      std::complex<double> sum = 0.0;
      for (std::size_t l = 0; l < lags.size(); ++l) {
        double phase = 0.0;
        for (int j = 0; j < d; ++j) phase += xi[j] * lags[l][j];
        sum += coefficients[l] * std::polar(1.0, -kTwoPi * phase);
      }
      out[static_cast<std::size_t>(i)] = sum.real();
    }
    return out;
  }
  fft::Buffer buf(static_cast<std::size_t>(total));
  for (std::size_t l = 0; l < lags.size(); ++l)
    buf[wrap_index(lags[l], grid.resolution, d)] += coefficients[l];
  fft::transform(std::vector<int>(d, grid.resolution), buf, fft::kForward);
  for (std::int64_t i = 0; i < total; ++i)
    out[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(i)].real();
  return out;
}

MtEstimate multitaper_estimate(const ProcessSample& sample, const TaperSet& tapers,
                               const FrequencyGrid& grid) {
  const AcquisitionDomain& domain = sample.domain;
  if (!(domain == tapers.domain()))
    throw std::invalid_argument("sample and tapers use different domains");
  if (grid.dimension != domain.dimension())
    throw std::invalid_argument("grid dimension does not match domain");
  const int d = domain.dimension();
  const int k = tapers.count();
  const auto& pts = domain.points();
  const int n = static_cast<int>(pts.size());

  // Padded bounding box: linear autocorrelation of the tapered samples.
  std::vector<int> pad(d);
  const Point& lo = domain.min_corner();
  const Point& hi = domain.max_corner();
  std::size_t pad_total = 1;
  for (int j = 0; j < d; ++j) {
    pad[j] = 2 * (hi[j] - lo[j] + 1);
    pad_total *= static_cast<std::size_t>(pad[j]);
  }
  std::vector<std::size_t> embed(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::size_t idx = 0;
    for (int j = 0; j < d; ++j)
      idx = idx * static_cast<std::size_t>(pad[j]) + static_cast<std::size_t>(pts[i][j] - lo[j]);
    embed[static_cast<std::size_t>(i)] = idx;
  }

  std::vector<double> acc(pad_total, 0.0);
  fft::Buffer buf(pad_total);
  for (int t = 0; t < k; ++t) {
    buf.zero();
    for (int i = 0; i < n; ++i)
      buf[embed[static_cast<std::size_t>(i)]] = sample.values[static_cast<std::size_t>(i)] *
                                                tapers.vectors()(i, t);
    fft::transform(pad, buf, fft::kForward);
    for (std::size_t i = 0; i < pad_total; ++i) buf[i] = std::norm(buf[i]);
    fft::transform(pad, buf, fft::kBackward);
    const double scale = 1.0 / (static_cast<double>(pad_total) * k);
    for (std::size_t i = 0; i < pad_total; ++i) acc[i] += buf[i].real() * scale;
  }

  const std::vector<Point>& lags = domain.difference_set();
  std::vector<double> coefficients(lags.size());
  for (std::size_t l = 0; l < lags.size(); ++l) {
    std::size_t idx = 0;
    for (int j = 0; j < d; ++j) {
      const int w = ((lags[l][j] % pad[j]) + pad[j]) % pad[j];
      idx = idx * static_cast<std::size_t>(pad[j]) + static_cast<std::size_t>(w);
    }
    coefficients[l] = acc[idx];
  }

  std::vector<double> grid_values = evaluate_on_grid(lags, coefficients, grid);
  return MtEstimate(degree_of(domain), lags, std::move(coefficients), grid,
                    std::move(grid_values));
}

double estimate_at(const ProcessSample& sample, const TaperSet& tapers,
                   std::span<const double> xi) {
  const AcquisitionDomain& domain = sample.domain;
  if (!(domain == tapers.domain()))
    throw std::invalid_argument("sample and tapers use different domains");
  const int d = domain.dimension();
  if (static_cast<int>(xi.size()) != d) throw std::invalid_argument("xi arity mismatch");
  const auto& pts = domain.points();
  const int n = static_cast<int>(pts.size());
  std::vector<std::complex<double>> phases(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double phase = 0.0;
    for (int j = 0; j < d; ++j) phase += xi[j] * pts[i][j];
    phases[static_cast<std::size_t>(i)] =
        sample.values[static_cast<std::size_t>(i)] * std::polar(1.0, -kTwoPi * phase);
  }
  double total = 0.0;
  for (int t = 0; t < tapers.count(); ++t) {
    std::complex<double> dft = 0.0;
    for (int i = 0; i < n; ++i) dft += phases[static_cast<std::size_t>(i)] * tapers.vectors()(i, t);
    total += std::norm(dft);
  }
  return total / tapers.count();
}

std::vector<double> expected_estimate_lags(const TaperSet& tapers, const Autocovariance& acov) {
  const AcquisitionDomain& domain = tapers.domain();
  if (acov.dimension() != domain.dimension())
    throw std::invalid_argument("autocovariance dimension mismatch");
  const auto& pts = domain.points();
  const int n = static_cast<int>(pts.size());
  const int d = domain.dimension();
  const std::vector<Point>& lags = domain.difference_set();

  // Averaged taper autocorrelation h_l, dense over the padded box.
  std::vector<int> pad(d);
  const Point& lo = domain.min_corner();
  const Point& hi = domain.max_corner();
  std::size_t pad_total = 1;
  for (int j = 0; j < d; ++j) {
    pad[j] = 2 * (hi[j] - lo[j] + 1);
    pad_total *= static_cast<std::size_t>(pad[j]);
  }
  std::vector<double> h(pad_total, 0.0);
  fft::Buffer buf(pad_total);
  for (int t = 0; t < tapers.count(); ++t) {
    buf.zero();
    for (int i = 0; i < n; ++i) {
      std::size_t idx = 0;
      for (int j = 0; j < d; ++j)
        idx = idx * static_cast<std::size_t>(pad[j]) + static_cast<std::size_t>(pts[i][j] - lo[j]);
      buf[idx] = tapers.vectors()(i, t);
    }
    fft::transform(pad, buf, fft::kForward);
    for (std::size_t i = 0; i < pad_total; ++i) buf[i] = std::norm(buf[i]);
    fft::transform(pad, buf, fft::kBackward);
    const double scale = 1.0 / (static_cast<double>(pad_total) * tapers.count());
    for (std::size_t i = 0; i < pad_total; ++i) h[i] += buf[i].real() * scale;
  }

  std::vector<double> out(lags.size());
  for (std::size_t l = 0; l < lags.size(); ++l) {
    std::size_t idx = 0;
    for (int j = 0; j < d; ++j) {
      const int w = ((lags[l][j] % pad[j]) + pad[j]) % pad[j];
      idx = idx * static_cast<std::size_t>(pad[j]) + static_cast<std::size_t>(w);
    }
    out[l] = h[idx] * acov.at(lags[l]);
  }
  return out;
}

Eigen::MatrixXcd quadratic_form_matrix(const TaperSet& tapers, std::span<const double> xi) {
  const AcquisitionDomain& domain = tapers.domain();
  const int d = domain.dimension();
  if (static_cast<int>(xi.size()) != d) throw std::invalid_argument("xi arity mismatch");
  const auto& pts = domain.points();
  const int n = static_cast<int>(pts.size());
  const Eigen::MatrixXd base =
      tapers.vectors() * tapers.vectors().transpose() / static_cast<double>(tapers.count());
  Eigen::VectorXcd phase(n);
  for (int i = 0; i < n; ++i) {
    double p = 0.0;
    for (int j = 0; j < d; ++j) p += xi[j] * pts[i][j];
    phase(i) = std::polar(1.0, -kTwoPi * p);
  }
  return phase.asDiagonal() * base * phase.conjugate().asDiagonal();
}

double sup_norm_distance(const SpectralDensity& density, const MtEstimate& estimate,
                         int oversample) {
  if (oversample < 4) throw std::invalid_argument("oversample must be >= 4");
  if (density.dimension() != estimate.dimension())
    throw std::invalid_argument("density dimension does not match estimate");
  const int resolution = std::max(1, oversample * estimate.degree());
  const FrequencyGrid grid(estimate.dimension(), resolution);
  const std::vector<double>* values = &estimate.grid_values();
  std::vector<double> recomputed;
  if (estimate.grid().resolution != resolution) {
    recomputed = evaluate_on_grid(estimate.lags(), estimate.lag_coefficients(), grid);
    values = &recomputed;
  }
  double worst = 0.0;
  const std::int64_t total = grid.size();
  for (std::int64_t i = 0; i < total; ++i) {
    const std::vector<double> xi = grid.point(i);
    worst = std::max(worst, std::abs(density.value(xi) - (*values)[static_cast<std::size_t>(i)]));
  }
  return worst;
}

double bias_bound(const AcquisitionDomain& domain, int taper_count, double c2) {
  if (taper_count < 1) throw std::invalid_argument("taper count must be >= 1");
  if (c2 < 0.0) throw std::invalid_argument("c2 norm must be >= 0");
  const double n = static_cast<double>(domain.cardinality());
  const double nb = static_cast<double>(domain.digital_perimeter());
  const double d = domain.dimension();
  const double k = taper_count;
  const double log_factor = std::max(0.0, 1.0 + std::log(n / nb));
  const double smooth = std::pow(k / n, 2.0 / d);
  const double boundary = nb / (std::pow(n, 1.0 - 1.0 / d) * std::pow(k, 1.0 / d)) * log_factor;
  return c2 * (smooth + boundary);
}

MseBound mse_bound(const AcquisitionDomain& domain, int taper_count) {
  if (domain.cardinality() < 3)
    throw std::invalid_argument("mse bound requires N_Omega >= 3");
  if (taper_count < 1) throw std::invalid_argument("taper count must be >= 1");
  const double n = static_cast<double>(domain.cardinality());
  const double nb = static_cast<double>(domain.digital_perimeter());
  const double d = domain.dimension();
  const double k = taper_count;
  const double log_diam = std::log(domain.diameter());
  MseBound out;
  const double ratio = std::max(0.0, log_diam) / k;
  out.variance_term = std::max(ratio, ratio * ratio);
  out.bias_smooth_term = std::pow(k / n, 4.0 / d);
  const double log_factor = std::max(0.0, 1.0 + std::log(n / nb));
  out.bias_boundary_term =
      nb * nb / (std::pow(n, 2.0 - 2.0 / d) * std::pow(k, 2.0 / d)) * log_factor * log_factor;
  out.value = out.variance_term + out.bias_smooth_term + out.bias_boundary_term;
  out.precondition_met = nb >= std::pow(n / k, 1.0 - 1.0 / d) - 1e-12;
  return out;
}

CorollaryTaperCount corollary_taper_count(const AcquisitionDomain& domain) {
  const double diam = domain.diameter();
  if (!(diam > 1.0))
    throw std::invalid_argument("corollary taper count requires diam(Omega) > 1");
  const double n = static_cast<double>(domain.cardinality());
  const int d = domain.dimension();
  const double raw = d == 1 ? std::pow(std::log(diam) * std::pow(n, 4), 0.2)
                            : std::cbrt(std::pow(std::log(diam), d) * n * n);
  CorollaryTaperCount out;
  const int unclamped = static_cast<int>(std::ceil(raw - 1e-9));
  out.count = std::clamp<int>(unclamped, 1, static_cast<int>(domain.cardinality()));
  out.clamped = out.count != unclamped;
  out.diameter_condition_ok = diam <= std::exp(std::pow(n, 1.0 / d));
  return out;
}

}  // namespace mtspec
