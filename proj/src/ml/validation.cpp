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

#include "ofrec/ml/validation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ofrec::ml {

namespace {

std::uint64_t fold_forest_seed(std::uint64_t seed, std::size_t fold) { return derive_seed(seed, 0xf01d, fold); }
std::uint64_t fold_perm_seed(std::uint64_t seed, std::size_t fold) { return derive_seed(seed, 0x9e4a, fold); }

}  // namespace

std::vector<Fold> stratified_kfold(std::span<const std::uint8_t> labels, std::size_t k,
                                   std::uint64_t seed) {
  if (k < 2) throw DomainError("stratified_kfold: k must be >= 2");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] ? 1 : 0].push_back(i);
  for (int c = 0; c < 2; ++c) {
    if (!by_class[c].empty() && by_class[c].size() < k) {
      throw DomainError("stratified_kfold: class " + std::to_string(c) + " has " +
                        std::to_string(by_class[c].size()) + " members, fewer than k=" + std::to_string(k));
    }
  }
  std::vector<std::vector<std::size_t>> test(k);
  std::size_t next = 0;
  for (int c = 0; c < 2; ++c) {
    Rng rng(derive_seed(seed, 0x5f01d, static_cast<std::uint64_t>(c)));
    rng.shuffle(std::span<std::size_t>(by_class[c]));
    for (auto idx : by_class[c]) {
      test[next].push_back(idx);
      next = (next + 1) % k;
    }
  }
  std::vector<Fold> folds(k);
  std::vector<std::size_t> owner(labels.size());
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(test[f].begin(), test[f].end());
    for (auto i : test[f]) owner[i] = f;
  }
  for (std::size_t f = 0; f < k; ++f) {
    folds[f].test = std::move(test[f]);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (owner[i] != f) folds[f].train.push_back(i);
    }
  }
  return folds;
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) return {};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

CvAuroc cv_auroc(const Samples& samples, const ForestParams& params, std::size_t k,
                 std::uint64_t seed) {
  return cross_validate_forest(samples, params, k, 0, seed).auroc;
}

CvAnalysis cross_validate_forest(const Samples& samples, const ForestParams& params, std::size_t k,
                                 std::size_t repeats, std::uint64_t seed) {
  const auto folds = stratified_kfold(samples.y, k, seed);
  const std::size_t d = samples.x.cols();
  CvAnalysis out;
  auto& imp = out.importance;
  if (repeats > 0) {
    imp.per_fold.assign(d, std::vector<double>(k, 0.0));
    imp.per_fold_repeat_std.assign(d, std::vector<double>(k, 0.0));
  }
  for (std::size_t f = 0; f < k; ++f) {
    const Samples train = samples.take(folds[f].train);
    const Samples test = samples.take(folds[f].test);
    ForestParams fp = params;
    fp.seed = fold_forest_seed(seed, f);
    const ForestModel model = fit_forest(train, fp);
    out.auroc.fold_auroc.push_back(auroc(model.predict_proba(test.x), test.y));
    for (std::size_t j = 0; j < d && repeats > 0; ++j) {
      const auto pi = permutation_importance(model, test, j, repeats, fold_perm_seed(seed, f));
      imp.per_fold[j][f] = pi.mean_drop;
      imp.per_fold_repeat_std[j][f] = pi.std_drop;
    }
  }
  const auto ms = mean_std(out.auroc.fold_auroc);
  out.auroc.mean = ms.mean;
  out.auroc.std = ms.std;
  for (std::size_t j = 0; j < imp.per_fold.size(); ++j) {
    const auto across = mean_std(imp.per_fold[j]);
    imp.mean_drop.push_back(across.mean);
    imp.std_across_folds.push_back(across.std);
    imp.mean_std_across_repeats.push_back(mean_std(imp.per_fold_repeat_std[j]).mean);
  }
  return out;
}

}  // namespace ofrec::ml
