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

#include "mtspec.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mtspec/bench.hpp"
#include "mtspec/circulant.hpp"
#include "mtspec/csv.hpp"
#include "mtspec/density.hpp"
#include "mtspec/domain.hpp"
#include "mtspec/errors.hpp"
#include "mtspec/estimator.hpp"
#include "mtspec/fano.hpp"
#include "mtspec/svg.hpp"
#include "mtspec/tapers.hpp"

#if defined(__GNUC__)
#define MTSPEC_EXPORT __attribute__((visibility("default")))
#else
#define MTSPEC_EXPORT
#endif

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs fn, translating exceptions into status codes + the thread-local
// message.
template <typename Fn>
mtspec_status guarded(Fn&& fn) {
  try {
    fn();
    return MTSPEC_OK;
  } catch (const mtspec::NumericalError& e) {
    set_error(e.what());
    return MTSPEC_ERR_NUMERIC;
  } catch (const IoError& e) {
    set_error(e.what());
    return MTSPEC_ERR_IO;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return MTSPEC_ERR_INVALID;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MTSPEC_ERR_INVALID;
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

struct mtspec_domain {
  mtspec::AcquisitionDomain value;
};
struct mtspec_density {
  mtspec::SpectralDensity value;
};
struct mtspec_tapers {
  mtspec::TaperSet value;
};
struct mtspec_model {
  mtspec::CirculantModel value;
};
struct mtspec_estimate {
  mtspec::MtEstimate value;
};

extern "C" {

MTSPEC_EXPORT const char* mtspec_version(void) {
  static const std::string v = mtspec::library_version();
  return v.c_str();
}

MTSPEC_EXPORT const char* mtspec_last_error(void) { return g_last_error.c_str(); }

/* ---- domains ---- */

MTSPEC_EXPORT mtspec_status mtspec_domain_parse(const char* spec, mtspec_domain** out) {
  return guarded([&] {
    if (!spec || !out) throw std::invalid_argument("null argument");
    *out = new mtspec_domain{mtspec::parse_domain_spec(spec)};
  });
}

MTSPEC_EXPORT mtspec_status mtspec_domain_read(const char* path, mtspec_domain** out) {
  return guarded([&] {
    if (!path || !out) throw std::invalid_argument("null argument");
    std::ifstream in(path);
    if (!in) throw IoError(std::string("cannot open domain file '") + path + "'");
    std::vector<std::string> warnings;
    auto domain = mtspec::read_domain(in, &warnings);
    for (const auto& w : warnings) std::cerr << "mtspec: warning: " << w << "\n";
    *out = new mtspec_domain{std::move(domain)};
  });
}

MTSPEC_EXPORT mtspec_status mtspec_domain_write(const mtspec_domain* domain, const char* path) {
  return guarded([&] {
    if (!domain || !path) throw std::invalid_argument("null argument");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(std::string("cannot open '") + path + "' for writing");
    mtspec::write_domain(out, domain->value);
  });
}

MTSPEC_EXPORT void mtspec_domain_free(mtspec_domain* domain) { delete domain; }

MTSPEC_EXPORT int32_t mtspec_domain_dimension(const mtspec_domain* domain) {
  return domain ? domain->value.dimension() : 0;
}
MTSPEC_EXPORT int64_t mtspec_domain_cardinality(const mtspec_domain* domain) {
  return domain ? domain->value.cardinality() : 0;
}
MTSPEC_EXPORT int64_t mtspec_domain_perimeter(const mtspec_domain* domain) {
  return domain ? domain->value.digital_perimeter() : 0;
}
MTSPEC_EXPORT double mtspec_domain_diameter(const mtspec_domain* domain) {
  return domain ? domain->value.diameter() : 0.0;
}

MTSPEC_EXPORT mtspec_status mtspec_domain_point(const mtspec_domain* domain, int64_t index,
                                                int32_t* coords) {
  return guarded([&] {
    if (!domain || !coords) throw std::invalid_argument("null argument");
    if (index < 0 || index >= domain->value.cardinality())
      throw std::invalid_argument("point index out of range");
    const auto& p = domain->value.points()[static_cast<std::size_t>(index)];
    std::memcpy(coords, p.data(), p.size() * sizeof(int32_t));
  });
}

/* ---- densities ---- */

MTSPEC_EXPORT mtspec_status mtspec_density_parse(const char* spec, mtspec_density** out) {
  return guarded([&] {
    if (!spec || !out) throw std::invalid_argument("null argument");
    *out = new mtspec_density{mtspec::parse_density_spec(spec)};
  });
}

MTSPEC_EXPORT void mtspec_density_free(mtspec_density* density) { delete density; }

MTSPEC_EXPORT int32_t mtspec_density_dimension(const mtspec_density* density) {
  return density ? density->value.dimension() : 0;
}

MTSPEC_EXPORT mtspec_status mtspec_density_value(const mtspec_density* density, const double* xi,
                                                 double* out) {
  return guarded([&] {
    if (!density || !xi || !out) throw std::invalid_argument("null argument");
    *out = density->value.value(
        {xi, static_cast<std::size_t>(density->value.dimension())});
  });
}

MTSPEC_EXPORT mtspec_status mtspec_density_c2_norm(const mtspec_density* density,
                                                   int32_t resolution, double* out) {
  return guarded([&] {
    if (!density || !out) throw std::invalid_argument("null argument");
    *out = mtspec::c2_norm(density->value, resolution);
  });
}

/* ---- tapers ---- */

MTSPEC_EXPORT mtspec_status mtspec_tapers_compute(const mtspec_domain* domain, double bandwidth,
                                                  int32_t count, mtspec_tapers** out) {
  return guarded([&] {
    if (!domain || !out) throw std::invalid_argument("null argument");
    const bool have_w = bandwidth > 0.0;
    const bool have_k = count > 0;
    if (have_w == have_k)
      throw std::invalid_argument("give exactly one of bandwidth or taper count");
    mtspec::TaperConfig config;
    if (have_w) {
      config.bandwidth = bandwidth;
      config.count = mtspec::default_taper_count(domain->value, bandwidth);
    } else {
      config.count = count;
      config.bandwidth = mtspec::bandwidth_for_count(domain->value, count);
    }
    *out = new mtspec_tapers{mtspec::compute_tapers(domain->value, config)};
  });
}

MTSPEC_EXPORT void mtspec_tapers_free(mtspec_tapers* tapers) { delete tapers; }

MTSPEC_EXPORT int32_t mtspec_tapers_count(const mtspec_tapers* tapers) {
  return tapers ? tapers->value.count() : 0;
}
MTSPEC_EXPORT double mtspec_tapers_bandwidth(const mtspec_tapers* tapers) {
  return tapers ? tapers->value.bandwidth() : 0.0;
}

MTSPEC_EXPORT mtspec_status mtspec_tapers_eigenvalue(const mtspec_tapers* tapers, int32_t index,
                                                     double* out) {
  return guarded([&] {
    if (!tapers || !out) throw std::invalid_argument("null argument");
    if (index < 0 || index >= tapers->value.count())
      throw std::invalid_argument("taper index out of range");
    *out = tapers->value.eigenvalues()[static_cast<std::size_t>(index)];
  });
}

MTSPEC_EXPORT mtspec_status mtspec_tapers_write_csv(const mtspec_tapers* tapers,
                                                    const char* path) {
  return guarded([&] {
    if (!tapers || !path) throw std::invalid_argument("null argument");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(std::string("cannot open '") + path + "' for writing");
    mtspec::write_tapers_csv(out, tapers->value);
  });
}

MTSPEC_EXPORT mtspec_status mtspec_default_taper_count(const mtspec_domain* domain,
                                                       double bandwidth, int32_t* out) {
  return guarded([&] {
    if (!domain || !out) throw std::invalid_argument("null argument");
    *out = mtspec::default_taper_count(domain->value, bandwidth);
  });
}

MTSPEC_EXPORT mtspec_status mtspec_corollary_taper_count(const mtspec_domain* domain,
                                                         int32_t* out, int32_t* clamped,
                                                         int32_t* diam_condition_ok) {
  return guarded([&] {
    if (!domain || !out) throw std::invalid_argument("null argument");
    const auto r = mtspec::corollary_taper_count(domain->value);
    *out = r.count;
    if (clamped) *clamped = r.clamped ? 1 : 0;
    if (diam_condition_ok) *diam_condition_ok = r.diameter_condition_ok ? 1 : 0;
  });
}

/* ---- simulation ---- */

MTSPEC_EXPORT mtspec_status mtspec_model_build(const mtspec_density* density, int32_t omega,
                                               mtspec_model** out) {
  return guarded([&] {
    if (!density || !out) throw std::invalid_argument("null argument");
    *out = new mtspec_model{mtspec::CirculantModel::build(density->value, omega)};
  });
}

MTSPEC_EXPORT void mtspec_model_free(mtspec_model* model) { delete model; }

MTSPEC_EXPORT int64_t mtspec_model_grid_size(const mtspec_model* model) {
  return model ? model->value.grid_size() : 0;
}

MTSPEC_EXPORT mtspec_status mtspec_model_sample_domain(const mtspec_model* model,
                                                       const mtspec_domain* domain,
                                                       uint64_t seed, double* values) {
  return guarded([&] {
    if (!model || !domain || !values) throw std::invalid_argument("null argument");
    const auto v = model->value.sample_on_domain(domain->value, seed);
    std::memcpy(values, v.data(), v.size() * sizeof(double));
  });
}

MTSPEC_EXPORT mtspec_status mtspec_simulate_on_domain(const mtspec_density* density,
                                                      const mtspec_domain* domain, uint64_t seed,
                                                      double* values) {
  return guarded([&] {
    if (!density || !domain || !values) throw std::invalid_argument("null argument");
    const int omega =
        std::max(1, static_cast<int>(std::ceil(domain->value.diameter())));
    const auto model = mtspec::CirculantModel::build(density->value, omega);
    const auto v = model.sample_on_domain(domain->value, seed);
    std::memcpy(values, v.data(), v.size() * sizeof(double));
  });
}

/* ---- estimation ---- */

MTSPEC_EXPORT mtspec_status mtspec_estimate_compute(const mtspec_tapers* tapers,
                                                    const double* values, int64_t n_values,
                                                    int32_t grid_resolution,
                                                    mtspec_estimate** out) {
  return guarded([&] {
    if (!tapers || !values || !out) throw std::invalid_argument("null argument");
    const auto& domain = tapers->value.domain();
    if (n_values != domain.cardinality())
      throw std::invalid_argument("sample length " + std::to_string(n_values) +
                                  " does not match domain cardinality " +
                                  std::to_string(domain.cardinality()));
    mtspec::ProcessSample sample(domain,
                                 std::vector<double>(values, values + n_values));
    const int resolution =
        grid_resolution > 0
            ? grid_resolution
            : std::max(1, 4 * static_cast<int>(std::ceil(domain.diameter())));
    mtspec::FrequencyGrid grid(domain.dimension(), resolution);
    *out = new mtspec_estimate{mtspec::multitaper_estimate(sample, tapers->value, grid)};
  });
}

MTSPEC_EXPORT void mtspec_estimate_free(mtspec_estimate* estimate) { delete estimate; }

MTSPEC_EXPORT int32_t mtspec_estimate_degree(const mtspec_estimate* estimate) {
  return estimate ? estimate->value.degree() : 0;
}
MTSPEC_EXPORT int64_t mtspec_estimate_grid_size(const mtspec_estimate* estimate) {
  return estimate ? estimate->value.grid().size() : 0;
}

MTSPEC_EXPORT mtspec_status mtspec_estimate_grid_value(const mtspec_estimate* estimate,
                                                       int64_t index, double* out) {
  return guarded([&] {
    if (!estimate || !out) throw std::invalid_argument("null argument");
    if (index < 0 || index >= estimate->value.grid().size())
      throw std::invalid_argument("grid index out of range");
    *out = estimate->value.grid_values()[static_cast<std::size_t>(index)];
  });
}

MTSPEC_EXPORT mtspec_status mtspec_estimate_value_at(const mtspec_estimate* estimate,
                                                     const double* xi, double* out) {
  return guarded([&] {
    if (!estimate || !xi || !out) throw std::invalid_argument("null argument");
    *out = estimate->value.value_at(
        {xi, static_cast<std::size_t>(estimate->value.dimension())});
  });
}

MTSPEC_EXPORT mtspec_status mtspec_estimate_write_csv(const mtspec_estimate* estimate,
                                                      const char* path) {
  return guarded([&] {
    if (!estimate || !path) throw std::invalid_argument("null argument");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(std::string("cannot open '") + path + "' for writing");
    mtspec::write_estimate_csv(out, estimate->value);
  });
}

MTSPEC_EXPORT mtspec_status mtspec_estimate_write_lags_csv(const mtspec_estimate* estimate,
                                                           const char* path) {
  return guarded([&] {
    if (!estimate || !path) throw std::invalid_argument("null argument");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(std::string("cannot open '") + path + "' for writing");
    mtspec::write_estimate_lags_csv(out, estimate->value);
  });
}

MTSPEC_EXPORT mtspec_status mtspec_estimate_write_svg(const mtspec_estimate* estimate,
                                                      const char* path) {
  return guarded([&] {
    if (!estimate || !path) throw std::invalid_argument("null argument");
    const auto& est = estimate->value;
    const int d = est.dimension();
    if (d == 1) {
      mtspec::svg::Series series{"S_hat", {}};
      const auto& grid = est.grid();
      for (std::int64_t i = 0; i < grid.size(); ++i)
        series.points.emplace_back(grid.point(i)[0],
                                   est.grid_values()[static_cast<std::size_t>(i)]);
      write_text_file(path, mtspec::svg::line_chart("multi-taper estimate", "xi", "S_hat",
                                                    {series}));
    } else if (d == 2) {
      const int r = est.grid().resolution;
      write_text_file(path,
                      mtspec::svg::heatmap("multi-taper estimate", r, r, est.grid_values()));
    } else {
      throw std::invalid_argument("SVG output supports d = 1 or 2 only");
    }
  });
}

MTSPEC_EXPORT mtspec_status mtspec_sup_distance(const mtspec_density* density,
                                                const mtspec_estimate* estimate,
                                                int32_t oversample, double* out) {
  return guarded([&] {
    if (!density || !estimate || !out) throw std::invalid_argument("null argument");
    *out = mtspec::sup_norm_distance(density->value, estimate->value, oversample);
  });
}

/* ---- bounds ---- */

MTSPEC_EXPORT mtspec_status mtspec_bias_bound(const mtspec_domain* domain, int32_t taper_count,
                                              double c2, double* out) {
  return guarded([&] {
    if (!domain || !out) throw std::invalid_argument("null argument");
    *out = mtspec::bias_bound(domain->value, taper_count, c2);
  });
}

MTSPEC_EXPORT mtspec_status mtspec_mse_bound(const mtspec_domain* domain, int32_t taper_count,
                                             double* value, int32_t* precondition_met) {
  return guarded([&] {
    if (!domain || !value) throw std::invalid_argument("null argument");
    const auto b = mtspec::mse_bound(domain->value, taper_count);
    *value = b.value;
    if (precondition_met) *precondition_met = b.precondition_met ? 1 : 0;
  });
}

MTSPEC_EXPORT mtspec_status mtspec_lower_bound_rate(const mtspec_domain* domain, double* rate,
                                                    int32_t* omega, int32_t* fano_class_size) {
  return guarded([&] {
    if (!domain || !rate) throw std::invalid_argument("null argument");
    const auto r = mtspec::lower_bound_rate(domain->value);
    *rate = r.rate;
    if (omega) *omega = r.omega;
    if (fano_class_size) *fano_class_size = r.fano_class_size;
  });
}

/* ---- experiments ---- */

namespace {

void fill_report(const mtspec::RiskReport& r, mtspec_risk_report* out) {
  out->dimension = r.dimension;
  out->cardinality = r.cardinality;
  out->perimeter = r.perimeter;
  out->diameter = r.diameter;
  out->taper_count = r.taper_count;
  out->bandwidth = r.bandwidth;
  out->oversample = r.oversample;
  out->replicates = r.replicates;
  out->seed = r.seed;
  out->mse = r.mse;
  out->mse_se = r.mse_se;
  out->bias_sup = r.bias_sup;
  out->variance_max = r.variance_max;
  out->mse_bound = r.mse_bound_value;
  out->bias_bound = r.bias_bound_value;
  out->lower_rate = r.lower_rate;
  out->precondition_met = r.precondition_met ? 1 : 0;
  out->density_c2 = r.density_c2;
  out->c2_warning = r.c2_warning ? 1 : 0;
}

}  // namespace

MTSPEC_EXPORT mtspec_status mtspec_run_mse_experiment(const mtspec_domain* domain,
                                                      const mtspec_density* density,
                                                      int32_t taper_count, int32_t oversample,
                                                      int32_t replicates, uint64_t seed,
                                                      int32_t threads, mtspec_risk_report* out) {
  return guarded([&] {
    if (!domain || !density || !out) throw std::invalid_argument("null argument");
    mtspec::RiskExperimentConfig config{domain->value, density->value, taper_count,
                                        oversample,    replicates,     seed,
                                        threads};
    fill_report(mtspec::run_mse_experiment(config), out);
  });
}

MTSPEC_EXPORT mtspec_status mtspec_run_rate_experiment(
    const char* family, const int64_t* sizes, int32_t n_sizes, const char* density_spec,
    int32_t oversample, int32_t replicates, uint64_t seed, int32_t threads,
    double synthetic_exponent, const char* csv_path, const char* svg_path, double* slope,
    double* half_width) {
  return guarded([&] {
    if (!family || !sizes || n_sizes < 1 || !density_spec)
      throw std::invalid_argument("null argument");
    mtspec::RateExperimentConfig config;
    const std::string fam = family;
    if (fam == "interval") {
      config.family = mtspec::DomainFamily::kInterval;
    } else if (fam == "square") {
      config.family = mtspec::DomainFamily::kSquare;
    } else {
      throw std::invalid_argument("unknown domain family '" + fam + "'");
    }
    config.sizes.assign(sizes, sizes + n_sizes);
    config.density_spec = density_spec;
    config.oversample = oversample;
    config.replicates = replicates;
    config.seed = seed;
    config.threads = threads;
    if (synthetic_exponent != 0.0) config.synthetic_exponent = synthetic_exponent;
    const mtspec::RateResult result = mtspec::run_rate_experiment(config);
    if (csv_path) {
      std::ofstream out(csv_path, std::ios::binary);
      if (!out) throw IoError(std::string("cannot open '") + csv_path + "' for writing");
      mtspec::write_rate_csv(out, result);
    }
    if (svg_path) {
      mtspec::svg::Series mse{"MSE", {}};
      mtspec::svg::Series reference{"reference rate", {}};
      const double anchor =
          result.points.front().report.mse / result.points.front().rate_reference;
      for (const auto& p : result.points) {
        mse.points.emplace_back(static_cast<double>(p.report.cardinality), p.report.mse);
        reference.points.emplace_back(static_cast<double>(p.report.cardinality),
                                      anchor * p.rate_reference);
      }
      write_text_file(svg_path, mtspec::svg::line_chart("sup-norm risk rate", "N",
                                                        "MSE", {mse, reference}, true, true));
    }
    if (slope) *slope = result.fit.slope;
    if (half_width) *half_width = result.fit.half_width;
  });
}

MTSPEC_EXPORT mtspec_status mtspec_run_fano_report(int32_t dimension, int32_t class_size,
                                                   double tau, int32_t omega,
                                                   const char* csv_path,
                                                   mtspec_fano_summary* out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null argument");
    const mtspec::FanoClass cls = mtspec::build_fano_class(dimension, class_size, tau);
    const mtspec::FanoPropertyReport props = mtspec::fano_property_report(cls);
    const mtspec::KlSumReport kl = mtspec::kl_sum(cls, omega);
    if (csv_path) {
      std::ofstream file(csv_path, std::ios::binary);
      if (!file) throw IoError(std::string("cannot open '") + csv_path + "' for writing");
      mtspec::write_fano_csv(file, cls, props, kl);
    }
    out->k_fano = cls.k_fano();
    out->epsilon = cls.epsilon();
    out->c2_norm = cls.c2_norm();
    out->c2_within_unit = cls.c2_within_unit() ? 1 : 0;
    out->sup_deviation = cls.sup_deviation();
    out->kl_sum = kl.kl_sum;
    out->parseval_bound = kl.parseval_bound;
    out->fano_threshold = kl.fano_threshold;
    out->fano_condition_ok = kl.fano_condition_ok ? 1 : 0;
    const bool props_ok = props.supports_disjoint && props.symmetry_residual < 1e-10 &&
                          props.partial_sum_dev_max <= 0.25 &&
                          props.partial_sum_min >= -1e-10 &&
                          props.sup_dev_center_error < 1e-12;
    out->properties_ok = props_ok ? 1 : 0;
  });
}

MTSPEC_EXPORT mtspec_status mtspec_tail_check(const mtspec_domain* domain,
                                              const mtspec_density* density,
                                              int32_t taper_count, const double* thresholds,
                                              int32_t n_thresholds, int32_t replicates,
                                              uint64_t seed, int32_t threads, double* fitted_c,
                                              double* empirical, double* bound) {
  return guarded([&] {
    if (!domain || !density || !thresholds || n_thresholds < 1 || !fitted_c)
      throw std::invalid_argument("null argument");
    mtspec::TailConfig config{domain->value,
                              density->value,
                              taper_count,
                              std::vector<double>(thresholds, thresholds + n_thresholds),
                              replicates,
                              seed,
                              threads};
    const mtspec::TailReport rep = mtspec::tail_check(config);
    *fitted_c = rep.fitted_c;
    if (empirical)
      std::memcpy(empirical, rep.empirical.data(), rep.empirical.size() * sizeof(double));
    if (bound) std::memcpy(bound, rep.bound.data(), rep.bound.size() * sizeof(double));
  });
}

}  // extern "C"
