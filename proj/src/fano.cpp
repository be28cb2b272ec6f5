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

#include "mtspec/fano.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "mtspec/circulant.hpp"
#include "mtspec/errors.hpp"
#include "mtspec/fft.hpp"

namespace mtspec {

namespace {

// Below this value of u = 1 - 4||x||^2 the bump underflows to zero; returning
// exact zeros also avoids inf * 0 in the derivative formulas.
constexpr double kBumpGuard = 1e-3;

double bump_u(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return 1.0 - 4.0 * r2;
}

struct BumpSups {
  double value;     // sup |A|
  double gradient;  // max_j sup |d_j A|
  double hessian;   // max_{j,k} sup |d_j d_k A|
};

// The axis profiles of the bump derivatives are one-dimensional in r, so the
// sups are dimension-independent; computed once on a fine radial grid.
const BumpSups& bump_sups() {
  static const BumpSups sups = [] {
    BumpSups s{0.0, 0.0, 0.0};
    const int n = 400000;
    for (int i = 0; i <= n; ++i) {
      const double r = 0.5 * i / n;
      const double u = 1.0 - 4.0 * r * r;
      if (u <= kBumpGuard) continue;
      const double a = std::exp(-1.0 / u);
      s.value = std::max(s.value, a);
      s.gradient = std::max(s.gradient, std::abs(8.0 * r * a / (u * u)));
      const double diag = a * (-8.0 / (u * u) + 64.0 * r * r / (u * u * u * u) -
                               128.0 * r * r / (u * u * u));
      // Mixed partial along the diagonal direction x_1 = x_2 = r/sqrt(2).
      const double mixed = a * (r * r / 2.0) *
                           (64.0 / (u * u * u * u) - 128.0 / (u * u * u));
      s.hessian = std::max({s.hessian, std::abs(diag), std::abs(mixed)});
    }
    return s;
  }();
  return sups;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Evaluates sum_k c_k e^{+2 pi i <xi,k>} on the uniform q^d grid by wrapping
// the coefficients and applying a backward DFT; reports the minimum value and
// the maximum deviation from 1/2. Exact for any q >= 1.
void partial_sum_on_grid(const std::vector<Point>& lags, const std::vector<double>& coefs,
                         int q, int d, double* min_value, double* max_dev) {
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(q);
  fft::Buffer buf(total);
  for (std::size_t l = 0; l < lags.size(); ++l) {
    std::size_t idx = 0;
    for (int j = 0; j < d; ++j) {
      const int w = ((lags[l][j] % q) + q) % q;
      idx = idx * static_cast<std::size_t>(q) + static_cast<std::size_t>(w);
    }
    buf[idx] += coefs[l];
  }
  fft::transform(std::vector<int>(d, q), buf, fft::kBackward);
  double mn = std::numeric_limits<double>::infinity();
  double dev = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double v = buf[i].real();
    mn = std::min(mn, v);
    dev = std::max(dev, std::abs(v - 0.5));
  }
  *min_value = mn;
  *max_dev = dev;
}

// S_n of the class: flat level plus the 2^d reflected bumps of index n.
class FanoDensity final : public DensityImpl {
 public:
  FanoDensity(int dimension, int class_size, double tau, int k_fano, int member, Point index)
      : dimension_(dimension),
        class_size_(class_size),
        tau_(tau),
        k_fano_(k_fano),
        member_(member),
        index_(std::move(index)) {
    // Precompute the 2^d bump centers phi(n, e) in the scaled frame.
    const int combos = 1 << dimension_;
    centers_.reserve(combos);
    for (int mask = 0; mask < combos; ++mask) {
      std::vector<double> c(dimension_);
      for (int j = 0; j < dimension_; ++j)
        c[j] = (mask >> j) & 1 ? -static_cast<double>(index_[j]) : static_cast<double>(index_[j]);
      centers_.push_back(std::move(c));
    }
  }

  int dimension() const override { return dimension_; }

  double value(std::span<const double> xi) const override {
    double total = 0.5;
    const double amp = tau_ / (static_cast<double>(k_fano_) * k_fano_);
    std::vector<double> arg(dimension_);
    for (const auto& c : centers_) {
      scaled_arg(xi, c, arg);
      total += amp * bump(arg);
    }
    return total;
  }

  bool has_derivatives() const override { return true; }

  void gradient(std::span<const double> xi, std::span<double> out) const override {
    const double amp = tau_ / (static_cast<double>(k_fano_) * k_fano_) * 2.0 * k_fano_;
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> arg(dimension_), g(dimension_);
    for (const auto& c : centers_) {
      scaled_arg(xi, c, arg);
      bump_gradient(arg, g);
      for (int j = 0; j < dimension_; ++j) out[j] += amp * g[j];
    }
  }

  void hessian(std::span<const double> xi, std::span<double> out) const override {
    const double amp = tau_ / (static_cast<double>(k_fano_) * k_fano_) * 4.0 * k_fano_ * k_fano_;
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> arg(dimension_), h(static_cast<std::size_t>(dimension_) * dimension_);
    for (const auto& c : centers_) {
      scaled_arg(xi, c, arg);
      bump_hessian(arg, h);
      for (std::size_t i = 0; i < h.size(); ++i) out[i] += amp * h[i];
    }
  }

  std::string name() const override {
    return "fano(" + std::to_string(dimension_) + "," + std::to_string(class_size_) + "," +
           fmt(tau_) + "," + std::to_string(member_) + ")";
  }

  const std::vector<std::vector<double>>& centers() const { return centers_; }

 private:
  // arg = 2K * wrap(xi) - phi(n, e), with xi wrapped into [-1/2, 1/2).
  void scaled_arg(std::span<const double> xi, const std::vector<double>& center,
                  std::vector<double>& out) const {
    for (int j = 0; j < dimension_; ++j) {
      const double w = xi[j] - std::round(xi[j]);
      out[j] = 2.0 * k_fano_ * w - center[j];
    }
  }

  int dimension_;
  int class_size_;
  double tau_;
  int k_fano_;
  int member_;
  Point index_;
  std::vector<std::vector<double>> centers_;
};

}  // namespace

double bump(std::span<const double> x) {
  const double u = bump_u(x);
  if (u <= kBumpGuard) return 0.0;
  return std::exp(-1.0 / u);
}

void bump_gradient(std::span<const double> x, std::span<double> out) {
  const double u = bump_u(x);
  if (u <= kBumpGuard) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double a = std::exp(-1.0 / u);
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = -8.0 * x[j] * a / (u * u);
}

void bump_hessian(std::span<const double> x, std::span<double> out) {
  const std::size_t d = x.size();
  const double u = bump_u(x);
  if (u <= kBumpGuard) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double a = std::exp(-1.0 / u);
  const double u2 = u * u;
  const double cross = 64.0 / (u2 * u2) - 128.0 / (u2 * u);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      double v = a * x[j] * x[k] * cross;
      if (j == k) v += -8.0 * a / u2;
      out[j * d + k] = v;
    }
  }
}

double bump_l2_squared(int dimension) {
  static std::mutex mu;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(dimension);
  if (it != cache.end()) return it->second;
  // Midpoint quadrature of A^2 over [-1/2, 1/2]^d; the integrand is smooth
  // and compactly supported, so convergence is fast.
  const int q = dimension == 1 ? 200000 : (dimension == 2 ? 1200 : 160);
  std::size_t total = 1;
  for (int j = 0; j < dimension; ++j) total *= static_cast<std::size_t>(q);
  double sum = 0.0;
  std::vector<double> x(dimension);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (int j = dimension - 1; j >= 0; --j) {
      x[j] = (static_cast<double>(rest % q) + 0.5) / q - 0.5;
      rest /= q;
    }
    const double a = bump(x);
    sum += a * a;
  }
  const double value = sum / static_cast<double>(total);
  cache[dimension] = value;
  return value;
}

std::vector<double> reflect(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("reflect arity mismatch");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = y[j] >= 0.0 ? x[j] : -x[j];
  return out;
}

double fano_tau_ceiling(int dimension, int class_size) {
  if (dimension < 1) throw std::invalid_argument("fano dimension must be >= 1");
  if (class_size < 1) throw std::invalid_argument("fano class size must be >= 1");
  const int k = static_cast<int>(std::ceil(std::pow(class_size, 1.0 / dimension) - 1e-9)) + 1;
  const BumpSups& s = bump_sups();
  const double k2 = static_cast<double>(k) * k;
  // C2(tau) = max(1/2 + tau supA / K^2, (2 tau / K) supA', 4 tau supA'').
  return std::min({(kFanoC2Ceiling - 0.5) * k2 / s.value,
                   kFanoC2Ceiling * k / (2.0 * s.gradient),
                   kFanoC2Ceiling / (4.0 * s.hessian)});
}

FanoClass::FanoClass(int dimension, int class_size, double tau)
    : dimension_(dimension), class_size_(class_size), tau_(tau) {
  if (dimension_ < 1) throw std::invalid_argument("fano dimension must be >= 1");
  if (class_size_ < 1) throw std::invalid_argument("fano class size M must be >= 1");
  if (!(tau_ > 0.0)) throw std::invalid_argument("fano tau must be > 0");
  k_fano_ = static_cast<int>(std::ceil(std::pow(class_size_, 1.0 / dimension_) - 1e-9)) + 1;

  epsilon_ = fano_tau_ceiling(dimension_, class_size_);
  const BumpSups& s = bump_sups();
  const double k2 = static_cast<double>(k_fano_) * k_fano_;
  c2_norm_ = std::max({0.5 + tau_ * s.value / k2, 2.0 * tau_ * s.gradient / k_fano_,
                       4.0 * tau_ * s.hessian});
  if (tau_ >= epsilon_)
    throw std::invalid_argument("fano tau " + fmt(tau_) + " >= admissible ceiling " +
                                fmt(epsilon_) + ": C2 norm would be " + fmt(c2_norm_) +
                                " (cap " + fmt(kFanoC2Ceiling) + ")");

  // First M indices of {1..K-1}^d in lexicographic order.
  indices_.reserve(static_cast<std::size_t>(class_size_));
  Point cur(dimension_, 1);
  for (int picked = 0; picked < class_size_; ++picked) {
    indices_.push_back(cur);
    int axis = dimension_ - 1;
    while (axis >= 0) {
      if (cur[axis] < k_fano_ - 1) {
        ++cur[axis];
        break;
      }
      cur[axis] = 1;
      --axis;
    }
    if (axis < 0 && picked + 1 < class_size_)
      throw std::logic_error("fano index set exhausted");  // cannot happen: (K-1)^d >= M
  }
}

FanoClass build_fano_class(int dimension, int class_size, double tau) {
  return FanoClass(dimension, class_size, tau);
}

SpectralDensity FanoClass::density(int n) const {
  if (n < 0 || n > class_size_)
    throw std::invalid_argument("fano member index must be in [0, M]");
  if (n == 0) return SpectralDensity::constant(0.5, dimension_);
  return SpectralDensity(std::make_shared<FanoDensity>(dimension_, class_size_, tau_, k_fano_,
                                                       n, indices_[static_cast<std::size_t>(n - 1)]));
}

double FanoClass::sup_deviation() const {
  return tau_ / (static_cast<double>(k_fano_) * k_fano_) * std::exp(-1.0);
}

std::vector<std::vector<double>> FanoClass::bump_centers(int n) const {
  if (n < 1 || n > class_size_) throw std::invalid_argument("bump centers exist for n in [1, M]");
  const Point& idx = indices_[static_cast<std::size_t>(n - 1)];
  std::vector<std::vector<double>> centers;
  const int combos = 1 << dimension_;
  for (int mask = 0; mask < combos; ++mask) {
    std::vector<double> c(dimension_);
    for (int j = 0; j < dimension_; ++j) {
      const double v = static_cast<double>(idx[j]) / (2.0 * k_fano_);
      c[j] = (mask >> j) & 1 ? -v : v;
    }
    centers.push_back(std::move(c));
  }
  return centers;
}

FanoPropertyReport fano_property_report(const FanoClass& cls, int p_cap, int resolution) {
  const int d = cls.dimension();
  const int m = cls.class_size();
  FanoPropertyReport rep;
  rep.p_cap = p_cap;
  rep.resolution = resolution > 0 ? resolution : (d == 1 ? 4096 : (d == 2 ? 512 : 128));
  rep.sup_dev_expected = cls.sup_deviation();

  const int q = rep.resolution;
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(q);

  // Cache grid values of every member once.
  std::vector<std::vector<double>> values(static_cast<std::size_t>(m));
  std::vector<double> xi(d);
  for (int n = 1; n <= m; ++n) {
    const SpectralDensity s = cls.density(n);
    auto& v = values[static_cast<std::size_t>(n - 1)];
    v.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
      std::size_t rest = i;
      for (int j = d - 1; j >= 0; --j) {
        xi[j] = static_cast<double>(rest % q) / q;
        rest /= q;
      }
      v[i] = s.value(xi);
    }
  }

  // (ii): sup deviations from S_0 and pairwise, plus the exact peak at centers.
  rep.sup_dev_grid_max = 0.0;
  rep.sup_dev_center_error = 0.0;
  for (int n = 1; n <= m; ++n) {
    double sup = 0.0;
    for (double v : values[static_cast<std::size_t>(n - 1)]) sup = std::max(sup, std::abs(v - 0.5));
    rep.sup_dev_grid_max = std::max(rep.sup_dev_grid_max, sup);
    const SpectralDensity s = cls.density(n);
    for (const auto& c : cls.bump_centers(n)) {
      rep.sup_dev_center_error = std::max(
          rep.sup_dev_center_error,
          std::abs(s.value(c) - 0.5 - rep.sup_dev_expected));
    }
  }
  rep.pairwise_sup_min = std::numeric_limits<double>::infinity();
  rep.pairwise_sup_max = 0.0;
  for (int a = 1; a <= m; ++a) {
    for (int b = a + 1; b <= m; ++b) {
      double sup = 0.0;
      const auto& va = values[static_cast<std::size_t>(a - 1)];
      const auto& vb = values[static_cast<std::size_t>(b - 1)];
      for (std::size_t i = 0; i < total; ++i) sup = std::max(sup, std::abs(va[i] - vb[i]));
      rep.pairwise_sup_min = std::min(rep.pairwise_sup_min, sup);
      rep.pairwise_sup_max = std::max(rep.pairwise_sup_max, sup);
    }
  }
  if (m == 1) rep.pairwise_sup_min = rep.pairwise_sup_max = rep.sup_dev_grid_max;

  // (iii): quadrature L2 norms against the closed-form reference.
  rep.l2sq.resize(static_cast<std::size_t>(m));
  for (int n = 1; n <= m; ++n) {
    double sum = 0.0;
    for (double v : values[static_cast<std::size_t>(n - 1)]) sum += (v - 0.5) * (v - 0.5);
    rep.l2sq[static_cast<std::size_t>(n - 1)] = sum / static_cast<double>(total);
  }
  rep.l2sq_reference = cls.tau() * cls.tau() * bump_l2_squared(d) /
                       std::pow(static_cast<double>(cls.k_fano()), 4.0 + d);

  // (iv)/(v): partial Fourier sums up to the cap, on the same grid.
  rep.partial_sum_dev_max = 0.0;
  rep.partial_sum_min = std::numeric_limits<double>::infinity();
  const int sym_lag = 32;
  rep.symmetry_residual = 0.0;
  for (int n = 1; n <= m; ++n) {
    const SpectralDensity s = cls.density(n);
    const Autocovariance acov = autocovariance(s, std::max(p_cap, sym_lag));
    for (int p = 0; p <= p_cap; ++p) {
      // F_p(S_n) on the uniform grid via lag wrapping (exact DFT evaluation).
      std::vector<Point> lags;
      std::vector<double> coefs;
      Point k(d, static_cast<Coord>(-p));
      while (true) {
        lags.push_back(k);
        coefs.push_back(acov.at(k));
        int axis = d - 1;
        while (axis >= 0) {
          if (k[axis] < p) {
            ++k[axis];
            break;
          }
          k[axis] = static_cast<Coord>(-p);
          --axis;
        }
        if (axis < 0) break;
      }
      double local_min = 0.0, local_dev = 0.0;
      partial_sum_on_grid(lags, coefs, q, d, &local_min, &local_dev);
      rep.partial_sum_min = std::min(rep.partial_sum_min, local_min);
      rep.partial_sum_dev_max = std::max(rep.partial_sum_dev_max, local_dev);
    }
    // eq-symmetry of coefficients: sigma(m) depends on |m| componentwise.
    Point mm(d, static_cast<Coord>(-sym_lag));
    while (true) {
      Point abs_m(d);
      for (int j = 0; j < d; ++j) abs_m[j] = static_cast<Coord>(std::abs(mm[j]));
      rep.symmetry_residual =
          std::max(rep.symmetry_residual, std::abs(acov.at(mm) - acov.at(abs_m)));
      int axis = d - 1;
      while (axis >= 0) {
        if (mm[axis] < sym_lag) {
          ++mm[axis];
          break;
        }
        mm[axis] = static_cast<Coord>(-sym_lag);
        --axis;
      }
      if (axis < 0) break;
    }
  }

  // Disjoint supports: centers of all (n, e) bumps pairwise separated by at
  // least 2 * radius = 1/(2K) in the unscaled frame.
  rep.supports_disjoint = true;
  std::vector<std::vector<double>> all_centers;
  for (int n = 1; n <= m; ++n)
    for (auto& c : cls.bump_centers(n)) all_centers.push_back(c);
  const double min_sep = 1.0 / (2.0 * cls.k_fano()) - 1e-12;
  for (std::size_t a = 0; a < all_centers.size(); ++a) {
    for (std::size_t b = a + 1; b < all_centers.size(); ++b) {
      double dist2 = 0.0;
      for (int j = 0; j < d; ++j) {
        const double dx = all_centers[a][j] - all_centers[b][j];
        dist2 += dx * dx;
      }
      if (std::sqrt(dist2) < min_sep) rep.supports_disjoint = false;
    }
  }
  return rep;
}

double kl_gaussian_diag(std::span<const double> v1, std::span<const double> v2) {
  if (v1.size() != v2.size()) throw std::invalid_argument("variance vectors differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < v1.size(); ++i) {
    if (!(v1[i] > 0.0) || !(v2[i] > 0.0))
      throw std::invalid_argument("variances must be positive");
    const double r = v1[i] / v2[i];
    sum += r - 1.0 - std::log(r);
  }
  return 0.5 * sum;
}

KlSumReport kl_sum(const FanoClass& cls, int omega) {
  if (omega < 1) throw std::invalid_argument("kl_sum omega must be >= 1");
  const int d = cls.dimension();
  const int m = cls.class_size();
  KlSumReport rep;
  rep.omega = omega;

  double l2_total = 0.0;
  std::size_t grid_points = 1;
  for (int j = 0; j < d; ++j) grid_points *= static_cast<std::size_t>(2 * omega + 1);
  const std::vector<double> flat(grid_points, 0.5);

  const int q = d == 1 ? 4096 : (d == 2 ? 512 : 128);
  std::size_t qtotal = 1;
  for (int j = 0; j < d; ++j) qtotal *= static_cast<std::size_t>(q);

  for (int n = 1; n <= m; ++n) {
    const SpectralDensity s = cls.density(n);
    const CirculantModel model = CirculantModel::build(s, omega);
    for (double v : model.eigenvalues()) {
      if (!(v > 0.0))
        throw NumericalError("kl_sum: nonpositive circulant eigenvalue for member " +
                             std::to_string(n));
    }
    const double kl = kl_gaussian_diag(model.eigenvalues(), flat);
    rep.per_class_member.push_back(kl);
    rep.kl_sum += kl;

    double sum = 0.0;
    std::vector<double> xi(d);
    for (std::size_t i = 0; i < qtotal; ++i) {
      std::size_t rest = i;
      for (int j = d - 1; j >= 0; --j) {
        xi[j] = static_cast<double>(rest % q) / q;
        rest /= q;
      }
      const double v = s.value(xi) - 0.5;
      sum += v * v;
    }
    l2_total += sum / static_cast<double>(qtotal);
  }
  rep.parseval_bound = 2.0 * static_cast<double>(grid_points) * l2_total;
  if (rep.kl_sum > rep.parseval_bound + 1e-8)
    throw NumericalError("kl_sum exceeds its Parseval bound: " + std::to_string(rep.kl_sum) +
                         " > " + std::to_string(rep.parseval_bound));
  rep.fano_threshold = 0.125 * m * std::log(static_cast<double>(m));
  rep.fano_condition_ok = rep.kl_sum <= rep.fano_threshold;
  return rep;
}

LowerBoundRate lower_bound_rate(const AcquisitionDomain& domain) {
  if (domain.cardinality() < 3)
    throw std::invalid_argument("lower bound rate requires N_Omega >= 3");
  const double n = static_cast<double>(domain.cardinality());
  const double diam = domain.diameter();
  const int d = domain.dimension();
  LowerBoundRate out;
  out.rate = std::pow(std::log(n) / std::pow(diam, d), 4.0 / (4.0 + d));
  out.omega = static_cast<int>(std::ceil(diam));
  const double w = static_cast<double>(out.omega);
  out.fano_class_size = static_cast<int>(std::ceil(
      std::pow(w / std::pow(std::log(w), 1.0 / d), static_cast<double>(d) * d / (4.0 + d)) -
      1e-9));
  return out;
}

}  // namespace mtspec
