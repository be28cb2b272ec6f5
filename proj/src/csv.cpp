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

#include "mtspec/csv.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mtspec {

std::string library_version() { return "mtspec 0.1.0"; }

std::string csv_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_tapers_csv(std::ostream& out, const TaperSet& tapers) {
  out << "# eigenvalues:";
  for (int k = 0; k < tapers.count(); ++k)
    out << (k ? "," : " ") << csv_number(tapers.eigenvalues()[static_cast<std::size_t>(k)]);
  out << "\n";
  out << "point_index";
  for (int j = 1; j <= tapers.domain().dimension(); ++j) out << ",coord_" << j;
  for (int k = 0; k < tapers.count(); ++k) out << ",taper_" << k;
  out << "\n";
  const auto& pts = tapers.domain().points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << i;
    for (Coord c : pts[i]) out << ',' << c;
    for (int k = 0; k < tapers.count(); ++k)
      out << ',' << csv_number(tapers.vectors()(static_cast<Eigen::Index>(i), k));
    out << "\n";
  }
}

void write_estimate_csv(std::ostream& out, const MtEstimate& estimate) {
  const int d = estimate.dimension();
  for (int j = 1; j <= d; ++j) out << (j > 1 ? "," : "") << "xi_" << j;
  out << ",S_hat\n";
  const FrequencyGrid& grid = estimate.grid();
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    const std::vector<double> xi = grid.point(i);
    for (int j = 0; j < d; ++j) out << (j ? "," : "") << csv_number(xi[j]);
    out << ',' << csv_number(estimate.grid_values()[static_cast<std::size_t>(i)]) << "\n";
  }
}

void write_estimate_lags_csv(std::ostream& out, const MtEstimate& estimate) {
  const int d = estimate.dimension();
  for (int j = 1; j <= d; ++j) out << (j > 1 ? "," : "") << "lag_" << j;
  out << ",sigma_hat\n";
  for (std::size_t i = 0; i < estimate.lags().size(); ++i) {
    for (int j = 0; j < d; ++j) out << (j ? "," : "") << estimate.lags()[i][j];
    out << ',' << csv_number(estimate.lag_coefficients()[i]) << "\n";
  }
}

void write_sample_csv(std::ostream& out, const AcquisitionDomain& domain,
                      const std::vector<double>& values) {
  if (values.size() != domain.points().size())
    throw std::invalid_argument("sample length does not match domain");
  const int d = domain.dimension();
  for (int j = 1; j <= d; ++j) out << (j > 1 ? "," : "") << "coord_" << j;
  out << ",value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (int j = 0; j < d; ++j) out << (j ? "," : "") << domain.points()[i][j];
    out << ',' << csv_number(values[i]) << "\n";
  }
}

void write_risk_csv_header(std::ostream& out) {
  out << "domain,density,d,N,N_perimeter,diameter,K,W,oversample,replicates,seed,"
         "mse,mse_se,bias_sup,variance_max,mse_bound,bias_bound,lower_rate,"
         "precondition_met,density_c2,c2_warning\n";
}

void write_risk_csv_row(std::ostream& out, const RiskReport& r) {
  out << r.domain_spec << ',' << r.density_spec << ',' << r.dimension << ',' << r.cardinality
      << ',' << r.perimeter << ',' << csv_number(r.diameter) << ',' << r.taper_count << ','
      << csv_number(r.bandwidth) << ',' << r.oversample << ',' << r.replicates << ',' << r.seed
      << ',' << csv_number(r.mse) << ',' << csv_number(r.mse_se) << ',' << csv_number(r.bias_sup)
      << ',' << csv_number(r.variance_max) << ',' << csv_number(r.mse_bound_value) << ','
      << csv_number(r.bias_bound_value) << ',' << csv_number(r.lower_rate) << ','
      << (r.precondition_met ? 1 : 0) << ',' << csv_number(r.density_c2) << ','
      << (r.c2_warning ? 1 : 0) << "\n";
}

void write_rate_csv(std::ostream& out, const RateResult& result) {
  out << "size,rate_functional,rate_reference,";
  write_risk_csv_header(out);
  for (const RatePoint& p : result.points) {
    out << p.size << ',' << csv_number(p.rate_functional) << ','
        << csv_number(p.rate_reference) << ',';
    write_risk_csv_row(out, p.report);
  }
  out << "# slope: " << csv_number(result.fit.slope) << " +- "
      << csv_number(result.fit.half_width)
      << " (log MSE against log rate_functional)\n";
}

void write_fano_csv(std::ostream& out, const FanoClass& cls, const FanoPropertyReport& props,
                    const KlSumReport& kl) {
  out << "member,sup_deviation_expected,l2sq,l2sq_reference,kl\n";
  for (int n = 1; n <= cls.class_size(); ++n) {
    out << n << ',' << csv_number(props.sup_dev_expected) << ','
        << csv_number(props.l2sq[static_cast<std::size_t>(n - 1)]) << ','
        << csv_number(props.l2sq_reference) << ','
        << csv_number(kl.per_class_member[static_cast<std::size_t>(n - 1)]) << "\n";
  }
  out << "# kl_sum: " << csv_number(kl.kl_sum) << "\n";
  out << "# parseval_bound: " << csv_number(kl.parseval_bound) << "\n";
  out << "# fano_threshold: " << csv_number(kl.fano_threshold)
      << " (alpha=1/8), satisfied: " << (kl.fano_condition_ok ? "yes" : "no") << "\n";
}

void write_metadata(std::ostream& out,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  out << "{\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out << "  \"" << entries[i].first << "\": \"" << entries[i].second << "\""
        << (i + 1 < entries.size() ? "," : "") << "\n";
  }
  out << "}\n";
}

std::vector<double> read_sample_csv(std::istream& in, const AcquisitionDomain& domain) {
  const int d = domain.dimension();
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty sample file");
  std::map<Point, double> by_point;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    Point p(d);
    std::string tok;
    for (int j = 0; j < d; ++j) {
      if (!std::getline(ss, tok, ','))
        throw std::invalid_argument("sample line " + std::to_string(lineno) + ": too few fields");
      p[j] = static_cast<Coord>(std::stol(tok));
    }
    if (!std::getline(ss, tok, ','))
      throw std::invalid_argument("sample line " + std::to_string(lineno) + ": missing value");
    const double v = std::stod(tok);
    if (!by_point.emplace(std::move(p), v).second)
      throw std::invalid_argument("sample line " + std::to_string(lineno) + ": duplicate point");
  }
  std::vector<double> values;
  values.reserve(domain.points().size());
  for (const Point& p : domain.points()) {
    auto it = by_point.find(p);
    if (it == by_point.end())
      throw std::invalid_argument("sample file is missing a domain point");
    values.push_back(it->second);
  }
  if (by_point.size() != domain.points().size())
    throw std::invalid_argument("sample file has " + std::to_string(by_point.size()) +
                                " points but the domain has " +
                                std::to_string(domain.points().size()));
  return values;
}

}  // namespace mtspec
