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

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ofrec/ml/matrix.hpp"
#include "ofrec/random.hpp"

namespace ofrec::ml {

struct TreeParams {
  /// Negative means unlimited.
  int max_depth = -1;
  std::size_t min_samples_leaf = 1;
};

struct TreeNode {
  /// -1 for leaves.
  int feature = -1;
  /// Samples with value <= threshold go left.
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int depth = 0;
  /// [not recoverable, recoverable]
  std::array<std::uint64_t, 2> counts{0, 0};
  double probability = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  bool predicted_class() const noexcept { return counts[1] > counts[0]; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// CART classification tree. Node 0 is the root.
class TreeModel {
 public:
  TreeModel() = default;
  TreeModel(std::vector<TreeNode> nodes, std::size_t n_features)
      : nodes_(std::move(nodes)), n_features_(n_features) {}

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t n_features() const noexcept { return n_features_; }

  /// Leaf reached by `row`.
  const TreeNode& route(std::span<const double> row) const;
  double predict_proba(std::span<const double> row) const { return route(row).probability; }
  std::vector<double> predict_proba(const FeatureMatrix& x) const;

  int depth() const;
  std::size_t leaf_count() const;
  std::set<std::size_t> split_features() const;

  friend bool operator==(const TreeModel&, const TreeModel&) = default;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t n_features_ = 0;
};

/// Gini CART over all features. Candidate thresholds are midpoints of
/// consecutive distinct values; the best split maximizes the impurity
/// decrease (compared exactly in integer arithmetic) with ties going to the
/// lowest feature index, then the lowest threshold. Impure nodes split even
/// at zero gain.
TreeModel fit_tree(const Samples& samples, const TreeParams& params = {});

/// Tree on the rows `rows` (duplicates allowed). When `features_per_split` is
/// set, each split draws features from `rng` in random order until that many
/// splittable features have been examined.
TreeModel fit_tree_rows(const Samples& samples, std::span<const std::size_t> rows,
                        const TreeParams& params, std::optional<std::size_t> features_per_split,
                        Rng* rng);

/// Indented rules; counts are [not recoverable, recoverable]:
///   root [370, 310]
///   |--- m1_frac <= 0.415 [340, 40]
///   |   |--- class: not recoverable [340, 40] p=0.117647
///   |--- m1_frac > 0.415 [30, 270]
///   ...
std::string export_text(const TreeModel& tree, std::span<const std::string_view> feature_names);

/// Line-oriented node/edge list for external renderers:
///   node <id> split <feature> <= <threshold> counts <neg> <pos> predicted <class>
///   node <id> leaf counts <neg> <pos> predicted <class>
///   edge <parent> <child> true|false
std::string export_graph(const TreeModel& tree, std::span<const std::string_view> feature_names);

}  // namespace ofrec::ml
