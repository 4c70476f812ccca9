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

#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include "ofrec/ml/auroc.hpp"
#include "ofrec/ml/forest.hpp"
#include "ofrec/ml/matrix.hpp"
#include "ofrec/random.hpp"

namespace ofrec::ml {

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  friend bool operator==(const Fold&, const Fold&) = default;
};

/// k stratified folds. Each class is shuffled with `seed` and dealt
/// round-robin, continuing the deal where the previous class stopped, so
/// per-fold class counts are within one of proportional. Throws DomainError
/// when a present class has fewer than k members.
std::vector<Fold> stratified_kfold(std::span<const std::uint8_t> labels, std::size_t k,
                                   std::uint64_t seed);

template <typename M>
concept ProbabilisticClassifier = requires(const M& m, const FeatureMatrix& x) {
  { m.predict_proba(x) } -> std::convertible_to<std::vector<double>>;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Population mean and standard deviation.
MeanStd mean_std(std::span<const double> values);

struct PermutationImportance {
  double mean_drop = 0.0;
  double std_drop = 0.0;
  std::vector<double> drops;
};

/// Baseline held-out AUROC minus AUROC with column `feature` shuffled,
/// averaged over `repeats` independent shuffles.
template <ProbabilisticClassifier Model>
PermutationImportance permutation_importance(const Model& model, const Samples& heldout,
                                             std::size_t feature, std::size_t repeats,
                                             std::uint64_t seed) {
  if (feature >= heldout.x.cols()) throw DomainError("permutation_importance: feature out of range");
  if (repeats == 0) throw DomainError("permutation_importance: repeats must be positive");
  const double baseline = auroc(model.predict_proba(heldout.x), heldout.y);
  PermutationImportance out;
  FeatureMatrix shuffled = heldout.x;
  std::vector<double> column = heldout.x.column(feature);
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    Rng rng(derive_seed(seed, feature, rep));
    std::vector<double> perm = column;
    rng.shuffle(std::span<double>(perm));
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled.at(i, feature) = perm[i];
    out.drops.push_back(baseline - auroc(model.predict_proba(shuffled), heldout.y));
  }
  const auto ms = mean_std(out.drops);
  out.mean_drop = ms.mean;
  out.std_drop = ms.std;
  return out;
}

struct CvAuroc {
  std::vector<double> fold_auroc;
  double mean = 0.0;
  double std = 0.0;
};

/// Held-out AUROC of a forest trained on the other k-1 folds, per fold.
CvAuroc cv_auroc(const Samples& samples, const ForestParams& params, std::size_t k,
                 std::uint64_t seed);

struct CvImportance {
  /// [feature][fold] mean drop over repeats.
  std::vector<std::vector<double>> per_fold;
  /// [feature][fold] std over repeats.
  std::vector<std::vector<double>> per_fold_repeat_std;
  std::vector<double> mean_drop;
  std::vector<double> std_across_folds;
  std::vector<double> mean_std_across_repeats;
};

struct CvAnalysis {
  CvAuroc auroc;
  CvImportance importance;
};

/// Cross-validated forest AUROC plus per-fold held-out permutation
/// importance for every feature, averaged across folds.
CvAnalysis cross_validate_forest(const Samples& samples, const ForestParams& params, std::size_t k,
                                 std::size_t repeats, std::uint64_t seed);

}  // namespace ofrec::ml
