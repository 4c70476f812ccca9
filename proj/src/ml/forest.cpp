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

#include "ofrec/ml/forest.hpp"

#include <cmath>
#include <numeric>

#include "ofrec/random.hpp"

namespace ofrec::ml {

namespace {

TreeModel fit_one(const Samples& samples, const ForestParams& params, std::size_t mtry,
                  std::size_t index) {
  Rng rng(tree_seed(params.seed, index));
  const std::size_t n = samples.size();
  std::vector<std::size_t> rows(n);
  if (params.bootstrap) {
    for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
  } else {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  }
  TreeParams tp{params.max_depth, params.min_samples_leaf};
  return fit_tree_rows(samples, rows, tp, mtry, &rng);
}

void check(const Samples& samples, const ForestParams& params) {
  if (samples.size() == 0) throw DomainError("fit_forest: empty training set");
  if (params.n_trees == 0) throw DomainError("fit_forest: n_trees must be positive");
}

}  // namespace

std::size_t resolve_max_features(const ForestParams& params, std::size_t n_features) {
  if (params.max_features > 0) return std::min(params.max_features, std::max<std::size_t>(n_features, 1));
  const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_features))));
  return std::max<std::size_t>(m, 1);
}

std::uint64_t tree_seed(std::uint64_t forest_seed, std::size_t index) noexcept {
  return derive_seed(forest_seed, 0x7ee5, index);
}

double ForestModel::predict_proba(std::span<const double> row) const {
  double acc = 0.0;
  for (const auto& t : trees_) acc += t.predict_proba(row);
  return acc / static_cast<double>(trees_.size());
}

std::vector<double> ForestModel::predict_proba(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows());
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static) if (n >= 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = predict_proba(x.row(i));
  return out;
}

std::set<std::size_t> ForestModel::split_features() const {
  std::set<std::size_t> out;
  for (const auto& t : trees_) {
    auto f = t.split_features();
    out.insert(f.begin(), f.end());
  }
  return out;
}

ForestModel fit_forest(const Samples& samples, const ForestParams& params) {
  check(samples, params);
  const std::size_t mtry = resolve_max_features(params, samples.x.cols());
  std::vector<TreeModel> trees(params.n_trees);
  const auto n = static_cast<std::ptrdiff_t>(params.n_trees);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    trees[i] = fit_one(samples, params, mtry, static_cast<std::size_t>(i));
  }
  return ForestModel(std::move(trees), params);
}

ForestModel fit_forest_serial(const Samples& samples, const ForestParams& params) {
  check(samples, params);
  const std::size_t mtry = resolve_max_features(params, samples.x.cols());
  std::vector<TreeModel> trees;
  trees.reserve(params.n_trees);
  for (std::size_t i = 0; i < params.n_trees; ++i) trees.push_back(fit_one(samples, params, mtry, i));
  return ForestModel(std::move(trees), params);
}

}  // namespace ofrec::ml
