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

#include "ofrec/ml/tree.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace ofrec::ml {

namespace {

__extension__ using u128 = unsigned __int128;

// Weighted Gini of a split is n - S with S = sq_l / n_l + sq_r / n_r, so
// maximizing S maximizes the impurity decrease. S is kept as a fraction.
struct SplitScore {
  u128 num = 0;
  u128 den = 1;

  static SplitScore of(std::uint64_t l0, std::uint64_t l1, std::uint64_t r0, std::uint64_t r1) {
    const u128 nl = l0 + l1, nr = r0 + r1;
    const u128 sql = u128{l0} * l0 + u128{l1} * l1;
    const u128 sqr = u128{r0} * r0 + u128{r1} * r1;
    return {sql * nr + sqr * nl, nl * nr};
  }
  bool beats(const SplitScore& o) const { return num * o.den > o.num * den; }
  bool ties(const SplitScore& o) const { return num * o.den == o.num * den; }
};

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  SplitScore score;
};

struct Entry {
  double value;
  std::uint8_t label;
};

std::optional<Split> best_split_on(const Samples& s, std::span<const std::size_t> rows,
                                   std::size_t feature, std::size_t min_leaf,
                                   std::array<std::uint64_t, 2> totals,
                                   std::vector<Entry>& scratch) {
  scratch.clear();
  for (auto r : rows) scratch.push_back({s.x.at(r, feature), s.y[r]});
  std::sort(scratch.begin(), scratch.end(), [](const Entry& a, const Entry& b) { return a.value < b.value; });
  std::optional<Split> best;
  std::array<std::uint64_t, 2> left{0, 0};
  const std::size_t n = scratch.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    ++left[scratch[i].label];
    if (!(scratch[i].value < scratch[i + 1].value)) continue;
    const std::size_t nl = i + 1;
    if (nl < min_leaf || n - nl < min_leaf) continue;
    const auto score = SplitScore::of(left[0], left[1], totals[0] - left[0], totals[1] - left[1]);
    if (!best || score.beats(best->score)) {
      const double lo = scratch[i].value, hi = scratch[i + 1].value;
      double mid = 0.5 * (lo + hi);
      if (!(mid < hi)) mid = lo;
      best = Split{feature, mid, score};
    }
  }
  return best;
}

struct Task {
  int node;
  std::vector<std::size_t> rows;
};

}  // namespace

const TreeNode& TreeModel::route(std::span<const double> row) const {
  const TreeNode* node = &nodes_.at(0);
  while (!node->is_leaf()) {
    node = &nodes_[row[node->feature] <= node->threshold ? node->left : node->right];
  }
  return *node;
}

std::vector<double> TreeModel::predict_proba(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_proba(x.row(i));
  return out;
}

int TreeModel::depth() const {
  int d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::set<std::size_t> TreeModel::split_features() const {
  std::set<std::size_t> out;
  for (const auto& n : nodes_) {
    if (!n.is_leaf()) out.insert(static_cast<std::size_t>(n.feature));
  }
  return out;
}

TreeModel fit_tree_rows(const Samples& samples, std::span<const std::size_t> rows,
                        const TreeParams& params, std::optional<std::size_t> features_per_split,
                        Rng* rng) {
  if (rows.empty()) throw DomainError("fit_tree: empty training set");
  if (samples.x.rows() != samples.y.size()) throw DomainError("fit_tree: feature/label count mismatch");
  if (features_per_split && (*features_per_split == 0 || rng == nullptr)) {
    throw DomainError("fit_tree: feature subsampling needs a positive count and an rng");
  }
  const std::size_t d = samples.x.cols();
  const std::size_t min_leaf = std::max<std::size_t>(1, params.min_samples_leaf);

  std::vector<TreeNode> nodes(1);
  std::vector<Task> stack;
  stack.push_back({0, std::vector<std::size_t>(rows.begin(), rows.end())});
  std::vector<Entry> scratch;
  std::vector<std::size_t> order(d);

  while (!stack.empty()) {
    Task task = std::move(stack.back());
    stack.pop_back();
    TreeNode& node = nodes[task.node];
    node.counts = {0, 0};
    for (auto r : task.rows) ++node.counts[samples.y[r] ? 1 : 0];
    const std::size_t n = task.rows.size();
    node.probability = static_cast<double>(node.counts[1]) / static_cast<double>(n);

    const bool pure = node.counts[0] == 0 || node.counts[1] == 0;
    const bool depth_capped = params.max_depth >= 0 && node.depth >= params.max_depth;
    if (pure || depth_capped || n < 2 * min_leaf) continue;

    std::iota(order.begin(), order.end(), std::size_t{0});
    if (features_per_split) rng->shuffle(std::span<std::size_t>(order));
    const std::size_t budget = features_per_split ? std::min(*features_per_split, d) : d;

    std::optional<Split> best;
    std::size_t examined = 0;
    for (std::size_t f : order) {
      auto cand = best_split_on(samples, task.rows, f, min_leaf, node.counts, scratch);
      if (!cand) continue;
      ++examined;
      if (!best || cand->score.beats(best->score) ||
          (cand->score.ties(best->score) && cand->feature < best->feature)) {
        best = cand;
      }
      if (examined == budget) break;
    }
    if (!best) continue;

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : task.rows) {
      (samples.x.at(r, best->feature) <= best->threshold ? left_rows : right_rows).push_back(r);
    }
    const int depth = node.depth;
    const int left_id = static_cast<int>(nodes.size());
    node.feature = static_cast<int>(best->feature);
    node.threshold = best->threshold;
    node.left = left_id;
    node.right = left_id + 1;
    // `node` is invalidated by the resize below.
    nodes.resize(nodes.size() + 2);
    nodes[left_id].depth = depth + 1;
    nodes[left_id + 1].depth = depth + 1;
    stack.push_back({left_id + 1, std::move(right_rows)});
    stack.push_back({left_id, std::move(left_rows)});
  }
  return TreeModel(std::move(nodes), d);
}

TreeModel fit_tree(const Samples& samples, const TreeParams& params) {
  std::vector<std::size_t> rows(samples.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return fit_tree_rows(samples, rows, params, std::nullopt, nullptr);
}

namespace {

std::string fmt6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string counts_str(const TreeNode& n) {
  return "[" + std::to_string(n.counts[0]) + ", " + std::to_string(n.counts[1]) + "]";
}

const char* class_name(bool recoverable) { return recoverable ? "recoverable" : "not recoverable"; }

std::string feature_label(std::span<const std::string_view> names, int f) {
  if (f >= 0 && static_cast<std::size_t>(f) < names.size()) return std::string(names[f]);
  return "x" + std::to_string(f);
}

void emit_text(const TreeModel& tree, std::span<const std::string_view> names, int id, int indent,
               std::ostringstream& os) {
  const auto& nodes = tree.nodes();
  const TreeNode& node = nodes[id];
  std::string pad;
  for (int i = 0; i < indent; ++i) pad += "|   ";
  if (node.is_leaf()) {
    os << pad << "|--- class: " << class_name(node.predicted_class()) << " " << counts_str(node)
       << " p=" << fmt6(node.probability) << "\n";
    return;
  }
  const std::string feat = feature_label(names, node.feature);
  const std::string thr = fmt6(node.threshold);
  os << pad << "|--- " << feat << " <= " << thr << " " << counts_str(nodes[node.left]) << "\n";
  emit_text(tree, names, node.left, indent + 1, os);
  os << pad << "|--- " << feat << " > " << thr << " " << counts_str(nodes[node.right]) << "\n";
  emit_text(tree, names, node.right, indent + 1, os);
}

}  // namespace

std::string export_text(const TreeModel& tree, std::span<const std::string_view> feature_names) {
  std::ostringstream os;
  if (tree.nodes().empty()) return "";
  os << "root " << counts_str(tree.nodes()[0]) << "\n";
  emit_text(tree, feature_names, 0, 0, os);
  return os.str();
}

std::string export_graph(const TreeModel& tree, std::span<const std::string_view> feature_names) {
  std::ostringstream os;
  const auto& nodes = tree.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    os << "node " << i;
    if (n.is_leaf()) {
      os << " leaf";
    } else {
      os << " split " << feature_label(feature_names, n.feature) << " <= " << fmt6(n.threshold);
    }
    os << " counts " << n.counts[0] << " " << n.counts[1] << " predicted "
       << (n.predicted_class() ? "recoverable" : "not_recoverable") << "\n";
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.is_leaf()) continue;
    os << "edge " << i << " " << n.left << " true\n";
    os << "edge " << i << " " << n.right << " false\n";
  }
  return os.str();
}

}  // namespace ofrec::ml
