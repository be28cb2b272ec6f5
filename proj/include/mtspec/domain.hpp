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
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace mtspec {

using Coord = std::int32_t;

/// A lattice point in Z^d. Coordinates compare lexicographically, which is the
/// canonical ordering used for all point-indexed vectors and matrices.
using Point = std::vector<Coord>;

/// Finite acquisition domain: a deduplicated, lexicographically sorted set of
/// lattice points, with cached combinatorial statistics.
///
/// The value is a cheap handle onto an immutable shared representation;
/// copies are O(1) and domains are safe to share across threads. The lazy
/// statistics (digital perimeter, diameter, difference set) are computed once
/// under a std::once_flag, so concurrent first accesses resolve to identical
/// values.
class AcquisitionDomain {
 public:
  /// Builds a domain from arbitrary points. Deduplicates and sorts.
  /// Throws std::invalid_argument if `points` is empty, if any point has
  /// arity != dimension, or if dimension < 1.
  static AcquisitionDomain from_points(int dimension, std::vector<Point> points);

  int dimension() const;
  std::int64_t cardinality() const;
  const std::vector<Point>& points() const;

  /// Number of unit-direction indicator transitions of the domain:
  /// for every axis j, counts lattice steps entering or leaving the set.
  std::int64_t digital_perimeter() const;

  /// Exact maximum Euclidean distance between two domain points.
  /// Zero iff the domain is a single point.
  double diameter() const;

  /// The lag set {n - m : n, m in domain}, sorted lexicographically.
  /// Contains 0 and is closed under negation.
  const std::vector<Point>& difference_set() const;

  /// True if the point at `p` belongs to the domain (binary search).
  bool contains(const Point& p) const;

  /// Componentwise minimum / maximum over all points.
  const Point& min_corner() const;
  const Point& max_corner() const;

  /// Largest per-axis extent, max_j (max_corner[j] - min_corner[j]).
  Coord max_extent() const;

  /// True if the domain is exactly the full box [min_corner, max_corner].
  bool is_box() const;

  bool operator==(const AcquisitionDomain& other) const;

 private:
  struct Impl;
  explicit AcquisitionDomain(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// The 1-d interval {1, ..., n}. Throws std::invalid_argument if n < 1.
AcquisitionDomain make_interval(std::int64_t n);

/// The product box {1..sides[0]} x ... x {1..sides[d-1]}.
AcquisitionDomain make_rectangle(const std::vector<std::int64_t>& sides);

/// All lattice points of Z^d with Euclidean norm <= radius.
AcquisitionDomain make_disk(double radius, int dimension = 2);

/// Test-support domain: the set of sites visited by a seeded simple random
/// walk of `steps` steps started at the origin (then deduplicated). The same
/// (dimension, steps, seed) triple always produces the same domain.
AcquisitionDomain make_blob(int dimension, int steps, std::uint64_t seed);

/// Parses a builtin domain spec: "interval(N)", "rect(a,b,...)",
/// "disk(r[,d])", "blob(d,steps,seed)".
AcquisitionDomain parse_domain_spec(const std::string& spec);

/// Text format: first line "dim d", then one whitespace-separated coordinate
/// tuple per line. Duplicate points are dropped with a note appended to
/// `warnings` (if non-null); wrong arity is an error.
AcquisitionDomain read_domain(std::istream& in, std::vector<std::string>* warnings = nullptr);
AcquisitionDomain read_domain_file(const std::string& path, std::vector<std::string>* warnings = nullptr);
void write_domain(std::ostream& out, const AcquisitionDomain& domain);
void write_domain_file(const std::string& path, const AcquisitionDomain& domain);

}  // namespace mtspec
