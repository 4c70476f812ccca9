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

#include "ofrec/ml/tree.hpp"

namespace ofrec::ml {

struct ForestParams {
  std::size_t n_trees = 200;
  /// Features examined per split; 0 selects ceil(sqrt(d)).
  std::size_t max_features = 0;
  int max_depth = -1;
  std::size_t min_samples_leaf = 1;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

std::size_t resolve_max_features(const ForestParams& params, std::size_t n_features);

/// Seed of tree `index`, fixed before fitting so that parallel and serial
/// fits produce identical forests.
std::uint64_t tree_seed(std::uint64_t forest_seed, std::size_t index) noexcept;

class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(std::vector<TreeModel> trees, ForestParams params)
      : trees_(std::move(trees)), params_(params) {}

  const std::vector<TreeModel>& trees() const noexcept { return trees_; }
  const ForestParams& params() const noexcept { return params_; }

  /// Mean of the trees' leaf probabilities, summed in tree order.
  double predict_proba(std::span<const double> row) const;
  std::vector<double> predict_proba(const FeatureMatrix& x) const;

  std::set<std::size_t> split_features() const;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;

 private:
  std::vector<TreeModel> trees_;
  ForestParams params_;
};

/// Random forest; trees are fitted in parallel.
ForestModel fit_forest(const Samples& samples, const ForestParams& params = {});

/// Serial reference for fit_forest.
ForestModel fit_forest_serial(const Samples& samples, const ForestParams& params = {});

}  // namespace ofrec::ml
