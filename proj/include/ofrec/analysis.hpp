// Copyright 2026 The ofrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ofrec/dataset.hpp"
#include "ofrec/ml/forest.hpp"
#include "ofrec/ml/tree.hpp"
#include "ofrec/ml/validation.hpp"

namespace ofrec::analysis {

struct AnalysisOptions {
  bool auroc = true;
  bool tree = true;
  bool forest = true;
  bool perm = true;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::size_t perm_repeats = 10;
  ml::ForestParams forest_params;
  ml::TreeParams tree_params{3, 1};
};

struct SingleFeatureAuroc {
  std::string feature;
  double raw = 0.0;
  double oriented = 0.0;
  bool negated = false;
};

struct Report {
  dataset::Summary summary;
  std::vector<SingleFeatureAuroc> single;
  std::optional<ml::CvAnalysis> cv;
  std::optional<ml::TreeModel> tree;
  AnalysisOptions options;
};

/// Throws UndefinedMetricError when the records hold a single class.
Report analyze(const std::vector<dataset::RunRecord>& records, const AnalysisOptions& opts);

/// Schema-stable report document (see docs/report_schema.md).
nlohmann::json report_to_json(const Report& report);

/// Plot data as CSV (and optional SVG) under `dir`, which must exist.
/// Returns the written file names.
std::vector<std::string> write_plots(const std::vector<dataset::RunRecord>& records, const Report& report,
                                     const std::string& dir, bool svg);

/// Equal-width histogram densities per class plus class medians.
struct ClassHistogram {
  std::vector<double> edges;  // bins + 1
  std::vector<double> density_neg;
  std::vector<double> density_pos;
  std::optional<double> median_neg;
  std::optional<double> median_pos;
};

ClassHistogram class_histogram(std::span<const double> values, std::span<const std::uint8_t> labels,
                               std::size_t bins);

double median(std::vector<double> values);

}  // namespace ofrec::analysis
