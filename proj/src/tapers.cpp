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

#include "mtspec/tapers.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "mtspec/errors.hpp"
#include "mtspec/fft.hpp"

namespace mtspec {

namespace {

// sin(x)/x with a guarded series near zero.
double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void check_bandwidth(double w) {
  if (!(w > 0.0) || w > 1.0) throw std::invalid_argument("bandwidth W must be in (0, 1]");
}

bool is_interval(const AcquisitionDomain& domain) {
  return domain.dimension() == 1 && domain.is_box();
}

// Deterministic presentation: eigenvalues nonincreasing, first nonzero
// component of each taper positive, near-degenerate clusters ordered by
// lexicographic vector comparison.
void canonicalize(Eigen::MatrixXd& vectors, std::vector<double>& values) {
  const int k = static_cast<int>(values.size());
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  Eigen::MatrixXd v(vectors.rows(), k);
  std::vector<double> lam(k);
  for (int i = 0; i < k; ++i) {
    v.col(i) = vectors.col(order[i]);
    lam[i] = values[order[i]];
  }
  for (int i = 0; i < k; ++i) {
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      if (std::abs(v(r, i)) > 1e-12) {
        if (v(r, i) < 0.0) v.col(i) = -v.col(i);
        break;
      }
    }
  }
  auto lex_less = [&](int a, int b) {
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      if (v(r, a) != v(r, b)) return v(r, a) < v(r, b);
    }
    return false;
  };
  int start = 0;
  while (start < k) {
    int end = start + 1;
    while (end < k && lam[end - 1] - lam[end] < 1e-12) ++end;
    if (end - start > 1) {
      std::vector<int> idx(end - start);
      std::iota(idx.begin(), idx.end(), start);
      std::stable_sort(idx.begin(), idx.end(), lex_less);
      Eigen::MatrixXd block(v.rows(), end - start);
      std::vector<double> lblock(end - start);
      for (int i = 0; i < end - start; ++i) {
        block.col(i) = v.col(idx[i]);
        lblock[i] = lam[idx[i]];
      }
      for (int i = 0; i < end - start; ++i) {
        v.col(start + i) = block.col(i);
        lam[start + i] = lblock[i];
      }
    }
    start = end;
  }
  vectors = std::move(v);
  values = std::move(lam);
}

// Commuting tridiagonal matrix of the 1-d interval concentration problem:
// shares eigenvectors with the sinc kernel, with matching descending order.
void interval_tridiagonal(int n, double w, std::vector<double>& diag,
                          std::vector<double>& offdiag) {
  diag.resize(n);
  offdiag.resize(n > 0 ? n - 1 : 0);
  const double c = std::cos(std::numbers::pi * w);
  for (int i = 0; i < n; ++i) {
    const double t = (n - 1) / 2.0 - i;
    diag[i] = t * t * c;
  }
  for (int i = 0; i + 1 < n; ++i)
    offdiag[i] = (i + 1) * (n - 1.0 - i) / 2.0;
}

// y = A v for the interval sinc kernel, via circulant embedding of length 2n.
class ToeplitzMatvec {
 public:
  ToeplitzMatvec(int n, double w) : n_(n), m_(2 * n), kernel_fft_(m_) {
    for (int j = 0; j < n_; ++j) {
      const double a = w * sinc(std::numbers::pi * w * j);
      kernel_fft_[static_cast<std::size_t>(j)] = a;
      if (j > 0) kernel_fft_[static_cast<std::size_t>(m_ - j)] = a;
    }
    fft::transform({m_}, kernel_fft_, fft::kForward);
  }

  void apply(const double* v, double* out) {
    fft::Buffer buf(m_);
    for (int j = 0; j < n_; ++j) buf[static_cast<std::size_t>(j)] = v[j];
    fft::transform({m_}, buf, fft::kForward);
    for (int j = 0; j < m_; ++j) buf[static_cast<std::size_t>(j)] *= kernel_fft_[static_cast<std::size_t>(j)];
    fft::transform({m_}, buf, fft::kBackward);
    const double scale = 1.0 / m_;
    for (int j = 0; j < n_; ++j) out[j] = buf[static_cast<std::size_t>(j)].real() * scale;
  }

 private:
  int n_;
  int m_;
  fft::Buffer kernel_fft_;
};

TaperSet dense_tapers(const AcquisitionDomain& domain, TaperConfig config) {
  const Eigen::MatrixXd m = concentration_matrix(domain, config.bandwidth);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericalError("concentration eigensolver failed to converge (N=" +
                         std::to_string(m.rows()) + ", W=" + std::to_string(config.bandwidth) +
                         ", trace=" + std::to_string(m.trace()) + ")");
  const int n = static_cast<int>(m.rows());
  const int k = config.count;
  Eigen::MatrixXd vectors(n, k);
  std::vector<double> values(k);
  for (int i = 0; i < k; ++i) {
    vectors.col(i) = solver.eigenvectors().col(n - 1 - i);  // descending
    values[i] = solver.eigenvalues()(n - 1 - i);
  }
  canonicalize(vectors, values);
  return TaperSet(domain, config, std::move(vectors), std::move(values));
}

TaperSet tridiagonal_tapers(const AcquisitionDomain& domain, TaperConfig config) {
  const int n = static_cast<int>(domain.cardinality());
  const int k = config.count;
  std::vector<double> diag, off;
  interval_tridiagonal(n, config.bandwidth, diag, off);

  std::vector<double> w(n);
  std::vector<double> z(static_cast<std::size_t>(n) * k);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(1, k)));
  lapack_int found = 0;
  // Ascending indices [n-k+1, n] select the k largest tridiagonal eigenvalues,
  // which correspond to the k most concentrated tapers.
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0, n - k + 1, n, 0.0,
      &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != k)
    throw NumericalError("tridiagonal eigensolver failed (info=" + std::to_string(info) +
                         ", found=" + std::to_string(found) + " of " + std::to_string(k) + ")");

  Eigen::MatrixXd vectors(n, k);
  for (int i = 0; i < k; ++i) {
    // Reverse: column k-1-i of the ascending output is concentration order i.
    for (int r = 0; r < n; ++r) vectors(r, i) = z[static_cast<std::size_t>(k - 1 - i) * n + r];
  }
  ToeplitzMatvec mv(n, config.bandwidth);
  std::vector<double> values(k);
  std::vector<double> av(n);
  for (int i = 0; i < k; ++i) {
    mv.apply(vectors.col(i).data(), av.data());
    double dot = 0.0;
    for (int r = 0; r < n; ++r) dot += vectors(r, i) * av[r];
    values[i] = dot;
  }
  canonicalize(vectors, values);
  return TaperSet(domain, config, std::move(vectors), std::move(values));
}

}  // namespace

TaperSet::TaperSet(AcquisitionDomain domain, TaperConfig config, Eigen::MatrixXd vectors,
                   std::vector<double> eigenvalues)
    : domain_(std::move(domain)),
      config_(config),
      vectors_(std::move(vectors)),
      eigenvalues_(std::move(eigenvalues)) {
  if (vectors_.rows() != domain_.cardinality() || vectors_.cols() != config_.count ||
      static_cast<int>(eigenvalues_.size()) != config_.count)
    throw std::invalid_argument("taper set shape mismatch");
}

Eigen::MatrixXd concentration_matrix(const AcquisitionDomain& domain, double bandwidth) {
  check_bandwidth(bandwidth);
  const auto& pts = domain.points();
  const int n = static_cast<int>(pts.size());
  const int d = domain.dimension();
  const double wd = std::pow(bandwidth, d);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = wd;
    for (int j = i + 1; j < n; ++j) {
      double v = wd;
      for (int a = 0; a < d; ++a)
        v *= sinc(std::numbers::pi * bandwidth * (pts[i][a] - pts[j][a]));
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

TaperSet compute_tapers(const AcquisitionDomain& domain, TaperConfig config, TaperSolve method) {
  check_bandwidth(config.bandwidth);
  const std::int64_t n = domain.cardinality();
  if (config.count < 1) throw std::invalid_argument("taper count must be >= 1");
  if (config.count > n)
    throw std::invalid_argument("taper count " + std::to_string(config.count) +
                                " exceeds domain cardinality " + std::to_string(n));
  if (method == TaperSolve::kTridiagonal && !is_interval(domain))
    throw std::invalid_argument("tridiagonal solve applies to 1-d intervals only");
  if (method == TaperSolve::kAuto)
    method = (is_interval(domain) && n >= 512) ? TaperSolve::kTridiagonal : TaperSolve::kDense;
  return method == TaperSolve::kTridiagonal ? tridiagonal_tapers(domain, config)
                                            : dense_tapers(domain, config);
}

std::vector<double> concentration_spectrum(const AcquisitionDomain& domain, double bandwidth) {
  check_bandwidth(bandwidth);
  const Eigen::MatrixXd m = concentration_matrix(domain, bandwidth);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("concentration eigensolver failed to converge (N=" +
                         std::to_string(m.rows()) + ")");
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + m.rows());
  std::reverse(values.begin(), values.end());
  return values;
}

int default_taper_count(const AcquisitionDomain& domain, double bandwidth) {
  check_bandwidth(bandwidth);
  const double x = static_cast<double>(domain.cardinality()) *
                   std::pow(bandwidth, domain.dimension());
  const int k = static_cast<int>(std::ceil(x - 1e-9));
  return std::clamp<int>(k, 1, static_cast<int>(domain.cardinality()));
}

double bandwidth_for_count(const AcquisitionDomain& domain, int count) {
  if (count < 1 || count > domain.cardinality())
    throw std::invalid_argument("taper count must be in [1, N_Omega]");
  return std::pow(static_cast<double>(count) / static_cast<double>(domain.cardinality()),
                  1.0 / domain.dimension());
}

}  // namespace mtspec
