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
#include <vector>

#include "mtspec/domain.hpp"

namespace mtspec {

struct TaperConfig {
  double bandwidth = 0.0;  // W in (0, 1]
  int count = 0;           // K in [1, N_Omega]
};

/// K orthonormal tapers on a domain, columns of an N x K matrix indexed by
/// the domain's canonical point order, together with their band-concentration
/// eigenvalues (nonincreasing, in (0, 1] up to rounding).
class TaperSet {
 public:
  TaperSet(AcquisitionDomain domain, TaperConfig config, Eigen::MatrixXd vectors,
           std::vector<double> eigenvalues);

  const AcquisitionDomain& domain() const { return domain_; }
  const TaperConfig& config() const { return config_; }
  int count() const { return config_.count; }
  double bandwidth() const { return config_.bandwidth; }
  /// N x K; column k is taper nu^(k).
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

 private:
  AcquisitionDomain domain_;
  TaperConfig config_;
  Eigen::MatrixXd vectors_;
  std::vector<double> eigenvalues_;
};

/// Spectral concentration matrix for (domain, W): entry (n, m) is
/// W^d * prod_j sinc(pi W (n_j - m_j)), with the diagonal limit W^d.
/// Symmetric positive definite. Throws for W outside (0, 1].
Eigen::MatrixXd concentration_matrix(const AcquisitionDomain& domain, double bandwidth);

enum class TaperSolve {
  kAuto,         // tridiagonal fast path for large 1-d intervals, dense otherwise
  kDense,        // full symmetric eigensolve of the concentration matrix
  kTridiagonal,  // 1-d intervals only: commuting tridiagonal + Rayleigh quotients
};

/// Computes the top-K eigenpairs of the concentration matrix, eigenvalues
/// nonincreasing. Deterministic output: each taper's first nonzero component
/// is positive, and eigenvalue clusters closer than 1e-12 are ordered by
/// lexicographic comparison of the taper entries.
TaperSet compute_tapers(const AcquisitionDomain& domain, TaperConfig config,
                        TaperSolve method = TaperSolve::kAuto);

/// All N_Omega concentration eigenvalues, nonincreasing (no eigenvectors).
std::vector<double> concentration_spectrum(const AcquisitionDomain& domain, double bandwidth);

/// Standard taper count: smallest integer >= N_Omega * W^d (exact-integer
/// products are not rounded up by floating noise).
int default_taper_count(const AcquisitionDomain& domain, double bandwidth);

/// The bandwidth that couples to a requested taper count, W = (K/N)^{1/d}.
double bandwidth_for_count(const AcquisitionDomain& domain, int count);

}  // namespace mtspec
