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

#include <cstdint>
#include <span>
#include <vector>

namespace ofrec::ml {

/// Mann-Whitney AUROC: the fraction of (positive, negative) pairs in which the
/// positive scores higher, ties counted as one half. Computed from midranks
/// in O(n log n). Throws UndefinedMetricError unless both classes occur.
double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Negates scores of features whose raw orientation opposes recoverability
/// (normalized entropy), so larger always means "more recoverable".
std::vector<double> orient_score(std::size_t feature_index, std::span<const double> values);

}  // namespace ofrec::ml
