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

#include <iosfwd>
#include <string>
#include <vector>

#include "mtspec/bench.hpp"
#include "mtspec/estimator.hpp"
#include "mtspec/fano.hpp"
#include "mtspec/tapers.hpp"

namespace mtspec {

/// Shortest round-trip decimal representation; all CSV output is
/// byte-deterministic for a given configuration.
std::string csv_number(double value);

/// "# eigenvalues:" sidecar line, then
/// "point_index,coord_1..coord_d,taper_0..taper_{K-1}".
void write_tapers_csv(std::ostream& out, const TaperSet& tapers);

/// "xi_1,...,xi_d,S_hat" over the estimate's grid.
void write_estimate_csv(std::ostream& out, const MtEstimate& estimate);

/// "lag_1,...,lag_d,sigma_hat".
void write_estimate_lags_csv(std::ostream& out, const MtEstimate& estimate);

/// "coord_1,...,coord_d,value".
void write_sample_csv(std::ostream& out, const AcquisitionDomain& domain,
                      const std::vector<double>& values);

void write_risk_csv_header(std::ostream& out);
void write_risk_csv_row(std::ostream& out, const RiskReport& report);

/// One row per size plus a footer comment with the fitted slope.
void write_rate_csv(std::ostream& out, const RateResult& result);

/// Per-member distances and KL terms plus the aggregate condition.
void write_fano_csv(std::ostream& out, const FanoClass& cls, const FanoPropertyReport& props,
                    const KlSumReport& kl);

/// Plain-text metadata sidecar (key/value JSON object).
void write_metadata(std::ostream& out,
                    const std::vector<std::pair<std::string, std::string>>& entries);

/// Reads a sample CSV produced by write_sample_csv; values are returned in
/// the domain's canonical order and must cover the domain exactly.
std::vector<double> read_sample_csv(std::istream& in, const AcquisitionDomain& domain);

std::string library_version();

}  // namespace mtspec
