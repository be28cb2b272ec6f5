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

#include <string>
#include <vector>

namespace mtspec::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Minimal hand-rolled line chart. With log_x/log_y the corresponding
/// coordinates must be positive. CSV remains the source of truth; plots are a
/// convenience view.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series,
                       bool log_x = false, bool log_y = false);

/// rows x cols heat map (row-major values), blue ramp, value range noted in
/// the subtitle.
std::string heatmap(const std::string& title, int rows, int cols,
                    const std::vector<double>& values);

}  // namespace mtspec::svg
