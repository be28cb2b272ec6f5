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

#include "mtspec/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace mtspec {

namespace {

constexpr Coord kMaxAbsCoord = 1 << 20;  // keeps packed hash keys collision-free

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (Coord c : p) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(c)) + 0x9e3779b97f4a7c15ULL +
           (h << 6) + (h >> 2);
    }
    return h;
  }
};

using PointSet = std::unordered_set<Point, PointHash>;

}  // namespace

struct AcquisitionDomain::Impl {
  int dimension = 0;
  std::vector<Point> points;  // sorted, unique
  Point min_corner;
  Point max_corner;
  bool is_box = false;

  mutable std::once_flag perimeter_flag;
  mutable std::int64_t perimeter = 0;
  mutable std::once_flag diameter_flag;
  mutable double diameter = 0.0;
  mutable std::once_flag diffset_flag;
  mutable std::vector<Point> diffset;

  std::int64_t compute_perimeter() const {
    PointSet set(points.begin(), points.end());
    std::int64_t total = 0;
    Point q;
    for (const Point& p : points) {
      q = p;
      for (int j = 0; j < dimension; ++j) {
        q[j] = p[j] + 1;
        if (set.find(q) == set.end()) ++total;
        q[j] = p[j] - 1;
        if (set.find(q) == set.end()) ++total;
        q[j] = p[j];
      }
    }
    return total;
  }

  double compute_diameter() const {
    const std::size_t n = points.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < dimension; ++k) {
          const double dx = static_cast<double>(points[i][k]) - points[j][k];
          s += dx * dx;
        }
        if (s > best) best = s;
      }
    }
    return std::sqrt(best);
  }

  std::vector<Point> compute_diffset() const {
    std::vector<Point> lags;
    if (is_box) {
      // Difference set of a full box is the centered box of extents.
      Point ext(dimension);
      for (int j = 0; j < dimension; ++j) ext[j] = max_corner[j] - min_corner[j];
      std::int64_t count = 1;
      for (int j = 0; j < dimension; ++j) count *= 2 * static_cast<std::int64_t>(ext[j]) + 1;
      lags.reserve(static_cast<std::size_t>(count));
      Point cur(dimension);
      for (int j = 0; j < dimension; ++j) cur[j] = -ext[j];
      while (true) {
        lags.push_back(cur);
        int axis = dimension - 1;
        while (axis >= 0) {
          if (cur[axis] < ext[axis]) {
            ++cur[axis];
            break;
          }
          cur[axis] = -ext[axis];
          --axis;
        }
        if (axis < 0) break;
      }
      return lags;  // already lexicographically sorted by construction
    }
    PointSet seen;
    Point lag(dimension);
    for (const Point& a : points) {
      for (const Point& b : points) {
        for (int j = 0; j < dimension; ++j) lag[j] = a[j] - b[j];
        seen.insert(lag);
      }
    }
    lags.assign(seen.begin(), seen.end());
    std::sort(lags.begin(), lags.end());
    return lags;
  }
};

AcquisitionDomain::AcquisitionDomain(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

AcquisitionDomain AcquisitionDomain::from_points(int dimension, std::vector<Point> points) {
  if (dimension < 1) throw std::invalid_argument("domain dimension must be >= 1");
  if (points.empty()) throw std::invalid_argument("domain must contain at least one point");
  for (const Point& p : points) {
    if (static_cast<int>(p.size()) != dimension)
      throw std::invalid_argument("domain point arity does not match dimension");
    for (Coord c : p) {
      if (c <= -kMaxAbsCoord || c >= kMaxAbsCoord)
        throw std::invalid_argument("domain coordinate magnitude too large");
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto impl = std::make_shared<Impl>();
  impl->dimension = dimension;
  impl->points = std::move(points);
  impl->min_corner = impl->points.front();
  impl->max_corner = impl->points.front();
  for (const Point& p : impl->points) {
    for (int j = 0; j < dimension; ++j) {
      impl->min_corner[j] = std::min(impl->min_corner[j], p[j]);
      impl->max_corner[j] = std::max(impl->max_corner[j], p[j]);
    }
  }
  std::int64_t box_count = 1;
  for (int j = 0; j < dimension; ++j)
    box_count *= static_cast<std::int64_t>(impl->max_corner[j]) - impl->min_corner[j] + 1;
  impl->is_box = box_count == static_cast<std::int64_t>(impl->points.size());
  return AcquisitionDomain(std::move(impl));
}

int AcquisitionDomain::dimension() const { return impl_->dimension; }
std::int64_t AcquisitionDomain::cardinality() const {
  return static_cast<std::int64_t>(impl_->points.size());
}
const std::vector<Point>& AcquisitionDomain::points() const { return impl_->points; }
const Point& AcquisitionDomain::min_corner() const { return impl_->min_corner; }
const Point& AcquisitionDomain::max_corner() const { return impl_->max_corner; }

Coord AcquisitionDomain::max_extent() const {
  Coord ext = 0;
  for (int j = 0; j < impl_->dimension; ++j)
    ext = std::max(ext, static_cast<Coord>(impl_->max_corner[j] - impl_->min_corner[j]));
  return ext;
}

bool AcquisitionDomain::is_box() const { return impl_->is_box; }

std::int64_t AcquisitionDomain::digital_perimeter() const {
  std::call_once(impl_->perimeter_flag, [this] { impl_->perimeter = impl_->compute_perimeter(); });
  return impl_->perimeter;
}

double AcquisitionDomain::diameter() const {
  std::call_once(impl_->diameter_flag, [this] { impl_->diameter = impl_->compute_diameter(); });
  return impl_->diameter;
}

const std::vector<Point>& AcquisitionDomain::difference_set() const {
  std::call_once(impl_->diffset_flag, [this] { impl_->diffset = impl_->compute_diffset(); });
  return impl_->diffset;
}

bool AcquisitionDomain::contains(const Point& p) const {
  return std::binary_search(impl_->points.begin(), impl_->points.end(), p);
}

bool AcquisitionDomain::operator==(const AcquisitionDomain& other) const {
  return impl_ == other.impl_ ||
         (impl_->dimension == other.impl_->dimension && impl_->points == other.impl_->points);
}

AcquisitionDomain make_interval(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("interval length must be >= 1");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) pts.push_back({static_cast<Coord>(i)});
  return AcquisitionDomain::from_points(1, std::move(pts));
}

AcquisitionDomain make_rectangle(const std::vector<std::int64_t>& sides) {
  if (sides.empty()) throw std::invalid_argument("rectangle needs at least one side");
  for (std::int64_t s : sides) {
    if (s < 1) throw std::invalid_argument("rectangle sides must be >= 1");
  }
  const int d = static_cast<int>(sides.size());
  std::vector<Point> pts;
  Point cur(d, 1);
  while (true) {
    pts.push_back(cur);
    int axis = d - 1;
    while (axis >= 0) {
      if (cur[axis] < sides[axis]) {
        ++cur[axis];
        break;
      }
      cur[axis] = 1;
      --axis;
    }
    if (axis < 0) break;
  }
  return AcquisitionDomain::from_points(d, std::move(pts));
}

AcquisitionDomain make_disk(double radius, int dimension) {
  if (dimension < 1) throw std::invalid_argument("disk dimension must be >= 1");
  if (!(radius >= 0.0)) throw std::invalid_argument("disk radius must be nonnegative");
  const Coord r = static_cast<Coord>(std::floor(radius));
  const double r2 = radius * radius;
  std::vector<Point> pts;
  Point cur(dimension, -r);
  while (true) {
    double s = 0.0;
    for (Coord c : cur) s += static_cast<double>(c) * c;
    if (s <= r2 + 1e-12) pts.push_back(cur);
    int axis = dimension - 1;
    while (axis >= 0) {
      if (cur[axis] < r) {
        ++cur[axis];
        break;
      }
      cur[axis] = -r;
      --axis;
    }
    if (axis < 0) break;
  }
  if (pts.empty()) throw std::invalid_argument("disk radius yields an empty domain");
  return AcquisitionDomain::from_points(dimension, std::move(pts));
}

AcquisitionDomain make_blob(int dimension, int steps, std::uint64_t seed) {
  if (dimension < 1) throw std::invalid_argument("blob dimension must be >= 1");
  if (steps < 0) throw std::invalid_argument("blob step count must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dir(0, 2 * dimension - 1);
  Point cur(dimension, 0);
  std::vector<Point> pts{cur};
  for (int s = 0; s < steps; ++s) {
    const int pick = dir(rng);
    cur[pick / 2] += (pick % 2 == 0) ? 1 : -1;
    pts.push_back(cur);
  }
  return AcquisitionDomain::from_points(dimension, std::move(pts));
}

namespace {

std::vector<double> parse_numeric_args(const std::string& spec, std::string* name) {
  const auto open = spec.find('(');
  const auto close = spec.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("malformed spec '" + spec + "', expected name(args)");
  *name = spec.substr(0, open);
  std::vector<double> args;
  std::string body = spec.substr(open + 1, close - open - 1);
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad numeric argument '" + tok + "' in '" + spec + "'");
    }
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    if (pos != tok.size())
      throw std::invalid_argument("bad numeric argument '" + tok + "' in '" + spec + "'");
    args.push_back(v);
  }
  return args;
}

std::int64_t as_integer(double v, const std::string& what) {
  const double r = std::nearbyint(v);
  if (std::abs(v - r) > 1e-9 || std::abs(r) > 1e15)
    throw std::invalid_argument(what + " must be an integer");
  return static_cast<std::int64_t>(r);
}

}  // namespace

AcquisitionDomain parse_domain_spec(const std::string& spec) {
  std::string name;
  const std::vector<double> args = parse_numeric_args(spec, &name);
  if (name == "interval") {
    if (args.size() != 1) throw std::invalid_argument("interval(N) takes one argument");
    return make_interval(as_integer(args[0], "interval length"));
  }
  if (name == "rect" || name == "rectangle") {
    if (args.empty()) throw std::invalid_argument("rect(a,b,...) needs at least one side");
    std::vector<std::int64_t> sides;
    for (double a : args) sides.push_back(as_integer(a, "rectangle side"));
    return make_rectangle(sides);
  }
  if (name == "disk") {
    if (args.empty() || args.size() > 2) throw std::invalid_argument("disk(r[,d]) takes 1-2 arguments");
    const int d = args.size() == 2 ? static_cast<int>(as_integer(args[1], "disk dimension")) : 2;
    return make_disk(args[0], d);
  }
  if (name == "blob") {
    if (args.size() != 3) throw std::invalid_argument("blob(d,steps,seed) takes three arguments");
    return make_blob(static_cast<int>(as_integer(args[0], "blob dimension")),
                     static_cast<int>(as_integer(args[1], "blob steps")),
                     static_cast<std::uint64_t>(as_integer(args[2], "blob seed")));
  }
  throw std::invalid_argument("unknown domain spec '" + spec + "'");
}

AcquisitionDomain read_domain(std::istream& in, std::vector<std::string>* warnings) {
  std::string line;
  int dimension = -1;
  std::vector<Point> pts;
  PointSet seen;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::stringstream ss(line);
    if (dimension < 0) {
      std::string tag;
      ss >> tag;
      if (!ss || tag != "dim")
        throw std::invalid_argument("domain file must start with a 'dim d' line");
      if (!(ss >> dimension) || dimension < 1)
        throw std::invalid_argument("bad dimension in domain file header");
      continue;
    }
    Point p;
    long long c;
    while (ss >> c) p.push_back(static_cast<Coord>(c));
    if (p.empty()) continue;  // blank line
    if (static_cast<int>(p.size()) != dimension)
      throw std::invalid_argument("domain file line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(dimension) + " coordinates, got " +
                                  std::to_string(p.size()));
    if (!seen.insert(p).second) {
      if (warnings)
        warnings->push_back("duplicate point dropped at line " + std::to_string(lineno));
      continue;
    }
    pts.push_back(std::move(p));
  }
  if (dimension < 0) throw std::invalid_argument("empty domain file");
  return AcquisitionDomain::from_points(dimension, std::move(pts));
}

AcquisitionDomain read_domain_file(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open domain file '" + path + "'");
  return read_domain(in, warnings);
}

void write_domain(std::ostream& out, const AcquisitionDomain& domain) {
  out << "dim " << domain.dimension() << "\n";
  for (const Point& p : domain.points()) {
    for (int j = 0; j < domain.dimension(); ++j) {
      if (j) out << ' ';
      out << p[j];
    }
    out << "\n";
  }
}

void write_domain_file(const std::string& path, const AcquisitionDomain& domain) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
  write_domain(out, domain);
}

}  // namespace mtspec
