/* Copyright 2026 The mtspec Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C API of the mtspec shared library: multi-taper spectral estimation on
 * lattice acquisition domains, exact Gaussian simulation via circulant
 * embedding, risk benchmarking, and minimax lower-bound diagnostics.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Functions return MTSPEC_OK on success; on failure they return an error
 * code and leave a human-readable message in mtspec_last_error() (per
 * thread). Domain/density specs are strings, e.g. "interval(64)",
 * "rect(8,8)", "disk(2.5)", "blob(2,200,7)", "constant(0.5)",
 * "cosine(0.5,0.2)", "fano(1,4,0.02,1)".
 */

#ifndef MTSPEC_H
#define MTSPEC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mtspec_status {
  MTSPEC_OK = 0,
  MTSPEC_ERR_INVALID = 2,  /* configuration / validation error */
  MTSPEC_ERR_NUMERIC = 3,  /* numerical failure */
  MTSPEC_ERR_IO = 4        /* file I/O failure */
} mtspec_status;

typedef struct mtspec_domain mtspec_domain;
typedef struct mtspec_density mtspec_density;
typedef struct mtspec_tapers mtspec_tapers;
typedef struct mtspec_model mtspec_model;
typedef struct mtspec_estimate mtspec_estimate;

const char* mtspec_version(void);
/* Message for the most recent failure on this thread. */
const char* mtspec_last_error(void);

/* ---- acquisition domains ---- */
mtspec_status mtspec_domain_parse(const char* spec, mtspec_domain** out);
/* Text format: "dim d" header then one coordinate tuple per line.
 * Duplicate points are dropped with a warning on stderr. */
mtspec_status mtspec_domain_read(const char* path, mtspec_domain** out);
mtspec_status mtspec_domain_write(const mtspec_domain* domain, const char* path);
void mtspec_domain_free(mtspec_domain* domain);

int32_t mtspec_domain_dimension(const mtspec_domain* domain);
int64_t mtspec_domain_cardinality(const mtspec_domain* domain);
int64_t mtspec_domain_perimeter(const mtspec_domain* domain);
double mtspec_domain_diameter(const mtspec_domain* domain);
/* Writes the d coordinates of point `index` (canonical order). */
mtspec_status mtspec_domain_point(const mtspec_domain* domain, int64_t index, int32_t* coords);

/* ---- spectral densities ---- */
mtspec_status mtspec_density_parse(const char* spec, mtspec_density** out);
void mtspec_density_free(mtspec_density* density);
int32_t mtspec_density_dimension(const mtspec_density* density);
mtspec_status mtspec_density_value(const mtspec_density* density, const double* xi, double* out);
mtspec_status mtspec_density_c2_norm(const mtspec_density* density, int32_t resolution,
                                     double* out);

/* ---- tapers ---- */
/* Exactly one of bandwidth (> 0) or count (> 0) must be given; the other is
 * derived (count = ceil(N W^d), bandwidth = (K/N)^{1/d}). */
mtspec_status mtspec_tapers_compute(const mtspec_domain* domain, double bandwidth, int32_t count,
                                    mtspec_tapers** out);
void mtspec_tapers_free(mtspec_tapers* tapers);
int32_t mtspec_tapers_count(const mtspec_tapers* tapers);
double mtspec_tapers_bandwidth(const mtspec_tapers* tapers);
mtspec_status mtspec_tapers_eigenvalue(const mtspec_tapers* tapers, int32_t index, double* out);
mtspec_status mtspec_tapers_write_csv(const mtspec_tapers* tapers, const char* path);

mtspec_status mtspec_default_taper_count(const mtspec_domain* domain, double bandwidth,
                                         int32_t* out);
/* Rate-optimal count; also reports whether the [1, N] clamp fired and whether
 * the diameter condition diam <= exp(N^{1/d}) holds (pass NULL to skip). */
mtspec_status mtspec_corollary_taper_count(const mtspec_domain* domain, int32_t* out,
                                           int32_t* clamped, int32_t* diam_condition_ok);

/* ---- exact simulation (circulant embedding) ---- */
mtspec_status mtspec_model_build(const mtspec_density* density, int32_t omega,
                                 mtspec_model** out);
void mtspec_model_free(mtspec_model* model);
int64_t mtspec_model_grid_size(const mtspec_model* model);
/* Sample restricted to the domain (canonical order); `values` must hold
 * N_Omega doubles. The model's omega must be >= the domain extent. */
mtspec_status mtspec_model_sample_domain(const mtspec_model* model, const mtspec_domain* domain,
                                         uint64_t seed, double* values);
/* Convenience: build a model with omega = ceil(diam) and draw one sample. */
mtspec_status mtspec_simulate_on_domain(const mtspec_density* density,
                                        const mtspec_domain* domain, uint64_t seed,
                                        double* values);

/* ---- multi-taper estimation ---- */
/* values has N_Omega entries in canonical order; grid_resolution <= 0 picks
 * 4 * ceil(diam). */
mtspec_status mtspec_estimate_compute(const mtspec_tapers* tapers, const double* values,
                                      int64_t n_values, int32_t grid_resolution,
                                      mtspec_estimate** out);
void mtspec_estimate_free(mtspec_estimate* estimate);
int32_t mtspec_estimate_degree(const mtspec_estimate* estimate);
int64_t mtspec_estimate_grid_size(const mtspec_estimate* estimate);
mtspec_status mtspec_estimate_grid_value(const mtspec_estimate* estimate, int64_t index,
                                         double* out);
mtspec_status mtspec_estimate_value_at(const mtspec_estimate* estimate, const double* xi,
                                       double* out);
mtspec_status mtspec_estimate_write_csv(const mtspec_estimate* estimate, const char* path);
mtspec_status mtspec_estimate_write_lags_csv(const mtspec_estimate* estimate, const char* path);
/* Line plot for d = 1, heat map for d = 2. */
mtspec_status mtspec_estimate_write_svg(const mtspec_estimate* estimate, const char* path);

mtspec_status mtspec_sup_distance(const mtspec_density* density,
                                  const mtspec_estimate* estimate, int32_t oversample,
                                  double* out);

/* ---- closed-form shape bounds (constants set to 1) ---- */
mtspec_status mtspec_bias_bound(const mtspec_domain* domain, int32_t taper_count, double c2,
                                double* out);
mtspec_status mtspec_mse_bound(const mtspec_domain* domain, int32_t taper_count, double* value,
                               int32_t* precondition_met);
mtspec_status mtspec_lower_bound_rate(const mtspec_domain* domain, double* rate, int32_t* omega,
                                      int32_t* fano_class_size);

/* ---- experiments ---- */
typedef struct mtspec_risk_report {
  int32_t dimension;
  int64_t cardinality;
  int64_t perimeter;
  double diameter;
  int32_t taper_count;
  double bandwidth;
  int32_t oversample;
  int32_t replicates;
  uint64_t seed;
  double mse;
  double mse_se;
  double bias_sup;
  double variance_max;
  double mse_bound;
  double bias_bound;
  double lower_rate;
  int32_t precondition_met;
  double density_c2;
  int32_t c2_warning;
} mtspec_risk_report;

mtspec_status mtspec_run_mse_experiment(const mtspec_domain* domain,
                                        const mtspec_density* density, int32_t taper_count,
                                        int32_t oversample, int32_t replicates, uint64_t seed,
                                        int32_t threads, mtspec_risk_report* out);

/* Rate experiment over a size family ("interval" or "square"). Writes the CSV
 * (and SVG when svg_path is non-NULL); reports the fitted slope of log MSE
 * against the rate functional. synthetic_exponent != 0 switches to the
 * injection self-check (no Monte Carlo). */
mtspec_status mtspec_run_rate_experiment(const char* family, const int64_t* sizes,
                                         int32_t n_sizes, const char* density_spec,
                                         int32_t oversample, int32_t replicates, uint64_t seed,
                                         int32_t threads, double synthetic_exponent,
                                         const char* csv_path, const char* svg_path,
                                         double* slope, double* half_width);

typedef struct mtspec_fano_summary {
  int32_t k_fano;
  double epsilon;               /* admissible tau ceiling for this (d, M) */
  double c2_norm;               /* max_n ||S_n||_C2 */
  int32_t c2_within_unit;
  double sup_deviation;         /* exact (tau/K^2) e^{-1} */
  double kl_sum;
  double parseval_bound;
  double fano_threshold;        /* (1/8) M log M */
  int32_t fano_condition_ok;
  int32_t properties_ok;        /* lemma property suite passed */
} mtspec_fano_summary;

/* Builds the class, runs the property suite and the KL analysis, and writes
 * the per-member CSV when csv_path is non-NULL. */
mtspec_status mtspec_run_fano_report(int32_t dimension, int32_t class_size, double tau,
                                     int32_t omega, const char* csv_path,
                                     mtspec_fano_summary* out);

/* Tail experiment: empirical exceedance of the estimator's max deviation over
 * the 4w grid, with the fitted tail constant. empirical/bound (if non-NULL)
 * receive n_thresholds entries. */
mtspec_status mtspec_tail_check(const mtspec_domain* domain, const mtspec_density* density,
                                int32_t taper_count, const double* thresholds,
                                int32_t n_thresholds, int32_t replicates, uint64_t seed,
                                int32_t threads, double* fitted_c, double* empirical,
                                double* bound);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MTSPEC_H */
