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

#include <span>
#include <vector>

#include "mtspec/density.hpp"
#include "mtspec/domain.hpp"

namespace mtspec {

/// Smooth radial bump A(x) = exp(-1/(1-4||x||^2)) for ||x|| < 1/2, else 0.
double bump(std::span<const double> x);
/// Analytic gradient / Hessian (row-major d x d) of the bump.
void bump_gradient(std::span<const double> x, std::span<double> out);
void bump_hessian(std::span<const double> x, std::span<double> out);
/// Squared L2 norm of the d-dimensional bump (cached quadrature).
double bump_l2_squared(int dimension);

/// Componentwise signed copy: out_j = x_j if y_j >= 0, -x_j otherwise.
/// An involution in x for fixed sign pattern y.
std::vector<double> reflect(std::span<const double> x, std::span<const double> y);

/// Admissibility ceiling for the perturbation amplitude: densities are
/// accepted while max_n ||S_n||_C2 stays below this cap. The cap is
/// deliberately above 1: the Hessian of the scaled bump is K-free
/// (4 tau sup|A''| ~ 124 tau), so a unit cap would reject even tau = 0.01;
/// the true C2 norm is always computed and reported.
inline constexpr double kFanoC2Ceiling = 10.0;

/// The hypothesis class used for minimax lower bounds: S_0 = 1/2 plus M
/// disjoint-bump perturbations S_n = S_0 + (tau/K^2) sum_e A(2K xi - phi(n,e))
/// with K = ceil(M^{1/d}) + 1 and n running over the first M lattice indices
/// of {1..K-1}^d in lexicographic order.
class FanoClass {
 public:
  FanoClass(int dimension, int class_size, double tau);

  int dimension() const { return dimension_; }
  int class_size() const { return class_size_; }
  double tau() const { return tau_; }
  int k_fano() const { return k_fano_; }
  const std::vector<Point>& indices() const { return indices_; }

  /// S_n for n in [0, M]; S_0 is the flat density.
  SpectralDensity density(int n) const;

  /// Exact sup deviation ||S_n - S_0||_inf = (tau/K^2) e^{-1}.
  double sup_deviation() const;
  /// Bump centers of S_n in [-1/2,1/2]^d (2^d of them).
  std::vector<std::vector<double>> bump_centers(int n) const;

  /// max_n ||S_n||_C2 (closed form from the bump derivative sups).
  double c2_norm() const { return c2_norm_; }
  bool c2_within_unit() const { return c2_norm_ <= 1.0; }
  /// tau ceiling for this (d, M) under kFanoC2Ceiling.
  double epsilon() const { return epsilon_; }

 private:
  int dimension_;
  int class_size_;
  double tau_;
  int k_fano_;
  std::vector<Point> indices_;
  double c2_norm_;
  double epsilon_;
};

/// Builds the class; throws std::invalid_argument reporting the violated C2
/// value and the admissible ceiling when tau >= epsilon.
FanoClass build_fano_class(int dimension, int class_size, double tau);
double fano_tau_ceiling(int dimension, int class_size);

/// Numerical verification of the class properties.
struct FanoPropertyReport {
  double sup_dev_expected = 0.0;        // (tau/K^2) e^{-1}
  double sup_dev_grid_max = 0.0;        // max_n grid sup of |S_n - S_0|
  double sup_dev_center_error = 0.0;    // |S_n(center) - S_0 - expected|, max over n
  double pairwise_sup_min = 0.0;        // min over n != m of grid sup |S_n - S_m|
  double pairwise_sup_max = 0.0;
  std::vector<double> l2sq;             // ||S_n - S_0||_2^2 per n (quadrature)
  double l2sq_reference = 0.0;          // tau^2 ||A||_2^2 / K^{4+d}
  double partial_sum_dev_max = 0.0;     // max_{n, p <= cap} ||F_p(S_n) - S_0||_inf
  double partial_sum_min = 0.0;         // min_{n, p <= cap, grid} F_p(S_n)
  double symmetry_residual = 0.0;       // max over ||m||_inf <= 32 of |sigma(m) - sigma(|m|)|
  bool supports_disjoint = false;
  int p_cap = 0;
  int resolution = 0;
};
FanoPropertyReport fano_property_report(const FanoClass& cls, int p_cap = 64, int resolution = 0);

/// Diagonal-Gaussian Kullback divergence
/// (1/2) sum_k [v1_k/v2_k - 1 - log(v1_k/v2_k)]; entries must be positive.
double kl_gaussian_diag(std::span<const double> v1, std::span<const double> v2);

struct KlSumReport {
  double kl_sum = 0.0;
  std::vector<double> per_class_member;  // KL(P_n, P_0), n = 1..M
  double parseval_bound = 0.0;           // 2 (2w+1)^d sum_n ||S_n - S_0||_2^2
  double fano_threshold = 0.0;           // (1/8) M log M
  bool fano_condition_ok = false;
  int omega = 0;
};

/// Sum over n of KL between the diagonalized circulant experiments of S_n and
/// S_0, over the (2 omega + 1)^d torus frequencies. Also evaluates the
/// Parseval-route upper bound and fails hard if the computed sum exceeds it
/// beyond 1e-8.
KlSumReport kl_sum(const FanoClass& cls, int omega);

struct LowerBoundRate {
  double rate = 0.0;        // (log N / diam^d)^{4/(4+d)}, constants 1
  int omega = 0;            // ceil(diam)
  int fano_class_size = 0;  // M = ceil((omega / (log omega)^{1/d})^{d^2/(4+d)})
};

/// Minimax lower-bound rate for the domain (requires N_Omega >= 3).
LowerBoundRate lower_bound_rate(const AcquisitionDomain& domain);

}  // namespace mtspec
