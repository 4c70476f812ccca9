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

#include "ofrec/ml/auroc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ofrec/errors.hpp"
#include "ofrec/features.hpp"

namespace ofrec::ml {

double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw DomainError("auroc: scores and labels differ in length");
  const std::size_t n = scores.size();
  for (double s : scores) {
    if (!std::isfinite(s)) throw DomainError("auroc: scores must be finite");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the rank sum of positives; midranks are half-integers, so doubling
  // keeps everything integral and exact.
  double twice_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double twice_midrank = static_cast<double>(i + 1 + j);  // 2 * (i+1 + j) / 2
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        twice_rank_sum += twice_midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw UndefinedMetricError("AUROC undefined for single-class data");
  }
  const double p = static_cast<double>(n_pos);
  const double twice_u = twice_rank_sum - p * (p + 1.0);
  return twice_u / (2.0 * p * static_cast<double>(n_neg));
}

std::vector<double> orient_score(std::size_t feature_index, std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  if (feature_index < features::kFeatureCount && !features::kLargerIsBetter[feature_index]) {
    for (double& v : out) v = -v;
  }
  return out;
}

}  // namespace ofrec::ml
