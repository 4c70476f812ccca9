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

#include "ofrec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "ofrec/errors.hpp"
#include "ofrec/features.hpp"
#include "ofrec/ml/auroc.hpp"
#include "ofrec/serialize.hpp"

namespace ofrec::analysis {

using nlohmann::json;
using features::kFeatureCount;
using features::kFeatureNames;

namespace {

constexpr std::size_t kHistogramBins = 20;

std::string num(double v) { return json(v).dump(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ClassHistogram class_histogram(std::span<const double> values, std::span<const std::uint8_t> labels,
                               std::size_t bins) {
  if (values.empty() || bins == 0) throw DomainError("class_histogram: need values and bins");
  ClassHistogram h;
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(b == bins ? hi : lo + width * static_cast<double>(b));
  std::vector<double> cnt[2] = {std::vector<double>(bins, 0.0), std::vector<double>(bins, 0.0)};
  std::vector<double> members[2];
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto b = static_cast<std::size_t>((values[i] - lo) / width);
    b = std::min(b, bins - 1);
    const int c = labels[i] ? 1 : 0;
    cnt[c][b] += 1.0;
    members[c].push_back(values[i]);
  }
  for (int c = 0; c < 2; ++c) {
    auto& dens = c ? h.density_pos : h.density_neg;
    const double n = static_cast<double>(members[c].size());
    for (std::size_t b = 0; b < bins; ++b) dens.push_back(n > 0 ? cnt[c][b] / (n * width) : 0.0);
  }
  if (!members[0].empty()) h.median_neg = median(members[0]);
  if (!members[1].empty()) h.median_pos = median(members[1]);
  return h;
}

Report analyze(const std::vector<dataset::RunRecord>& records, const AnalysisOptions& opts) {
  if (records.empty()) throw DomainError("cannot analyze an empty dataset");
  Report rep;
  rep.options = opts;
  rep.summary = dataset::summarize(records);
  if (rep.summary.recoverable == 0 || rep.summary.non_recoverable == 0) {
    throw UndefinedMetricError("AUROC undefined for single-class data");
  }
  const ml::Samples samples = dataset::to_samples(records);

  if (opts.auroc) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      const auto col = samples.x.column(j);
      SingleFeatureAuroc s;
      s.feature = std::string(kFeatureNames[j]);
      s.raw = ml::auroc(col, samples.y);
      s.oriented = ml::auroc(ml::orient_score(j, col), samples.y);
      s.negated = !features::kLargerIsBetter[j];
      rep.single.push_back(s);
    }
  }
  if (opts.forest || opts.perm) {
    ml::ForestParams fp = opts.forest_params;
    rep.cv = ml::cross_validate_forest(samples, fp, opts.folds, opts.perm ? opts.perm_repeats : 0, opts.seed);
  }
  if (opts.tree) rep.tree = ml::fit_tree(samples, opts.tree_params);
  return rep;
}

json report_to_json(const Report& rep) {
  json j;
  j["schema"] = "ofrec.report";
  j["version"] = 1;
  j["features"] = std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end());
  j["summary"] = dataset::summary_to_json(rep.summary);
  j["seed"] = rep.options.seed;

  if (!rep.single.empty()) {
    json rows = json::array();
    for (const auto& s : rep.single) {
      rows.push_back({{"feature", s.feature}, {"auroc", s.oriented}, {"raw_auroc", s.raw}, {"negated", s.negated}});
    }
    std::vector<std::size_t> order(rep.single.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rep.single[a].oriented > rep.single[b].oriented; });
    json ranking = json::array();
    for (auto i : order) ranking.push_back(rep.single[i].feature);
    j["single_feature_auroc"] = {{"table", rows}, {"ranking", ranking}};
  }

  if (rep.cv) {
    const auto& fp = rep.options.forest_params;
    j["forest_cv"] = {{"k", rep.options.folds},
                      {"fold_auroc", rep.cv->auroc.fold_auroc},
                      {"mean", rep.cv->auroc.mean},
                      {"std", rep.cv->auroc.std},
                      {"params",
                       {{"n_trees", fp.n_trees},
                        {"max_features", ml::resolve_max_features(fp, kFeatureCount)},
                        {"max_depth", fp.max_depth},
                        {"min_samples_leaf", fp.min_samples_leaf},
                        {"bootstrap", fp.bootstrap}}}};
    const auto& imp = rep.cv->importance;
    if (!imp.mean_drop.empty()) {
      json rows = json::array();
      for (std::size_t f = 0; f < imp.mean_drop.size(); ++f) {
        rows.push_back({{"feature", std::string(kFeatureNames[f])},
                        {"mean_drop", imp.mean_drop[f]},
                        {"std_across_folds", imp.std_across_folds[f]},
                        {"std_across_repeats", imp.mean_std_across_repeats[f]},
                        {"per_fold", imp.per_fold[f]}});
      }
      j["permutation_importance"] = {{"repeats", rep.options.perm_repeats}, {"table", rows}};
    }
  }

  if (rep.tree) {
    json nodes = json::array();
    const auto& tn = rep.tree->nodes();
    for (std::size_t i = 0; i < tn.size(); ++i) {
      const auto& n = tn[i];
      json node = {{"id", i},
                   {"counts", {n.counts[0], n.counts[1]}},
                   {"depth", n.depth},
                   {"predicted", n.predicted_class() ? "recoverable" : "not_recoverable"},
                   {"probability", n.probability}};
      if (!n.is_leaf()) {
        node["feature"] = std::string(kFeatureNames[n.feature]);
        node["threshold"] = n.threshold;
        node["left"] = n.left;
        node["right"] = n.right;
      }
      nodes.push_back(node);
    }
    const auto& tp = rep.options.tree_params;
    j["tree"] = {{"params", {{"max_depth", tp.max_depth}, {"min_samples_leaf", tp.min_samples_leaf}}},
                 {"rules", ml::export_text(*rep.tree, kFeatureNames)},
                 {"graph", ml::export_graph(*rep.tree, kFeatureNames)},
                 {"nodes", nodes}};
  }
  return j;
}

namespace {

// Minimal standalone SVG plots.
struct Frame {
  double x0, x1, y0, y1;
  static constexpr double kW = 480, kH = 360, kPad = 48;
  double px(double x) const { return kPad + (x - x0) / (x1 - x0) * (kW - 2 * kPad); }
  double py(double y) const { return kH - kPad - (y - y0) / (y1 - y0) * (kH - 2 * kPad); }
};

const char* kColorNeg = "#ff7f0e";
const char* kColorPos = "#1f77b4";

std::string svg_open(const Frame& f, const std::string& title, const std::string& xlabel, const std::string& ylabel) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Frame::kW << "\" height=\"" << Frame::kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << Frame::kW / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n"
     << "<line x1=\"" << Frame::kPad << "\" y1=\"" << Frame::kH - Frame::kPad << "\" x2=\"" << Frame::kW - Frame::kPad
     << "\" y2=\"" << Frame::kH - Frame::kPad << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << Frame::kPad << "\" y1=\"" << Frame::kPad << "\" x2=\"" << Frame::kPad << "\" y2=\""
     << Frame::kH - Frame::kPad << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << Frame::kW / 2 << "\" y=\"" << Frame::kH - 12 << "\" text-anchor=\"middle\">" << xlabel
     << "</text>\n"
     << "<text x=\"14\" y=\"" << Frame::kH / 2 << "\" transform=\"rotate(-90 14 " << Frame::kH / 2
     << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  auto tick = [&](double v, bool xaxis) {
    std::ostringstream t;
    t.precision(3);
    t << v;
    if (xaxis) {
      os << "<text x=\"" << f.px(v) << "\" y=\"" << Frame::kH - Frame::kPad + 16 << "\" text-anchor=\"middle\">"
         << t.str() << "</text>\n";
    } else {
      os << "<text x=\"" << Frame::kPad - 4 << "\" y=\"" << f.py(v) + 4 << "\" text-anchor=\"end\">" << t.str()
         << "</text>\n";
    }
  };
  tick(f.x0, true);
  tick(f.x1, true);
  tick(f.y0, false);
  tick(f.y1, false);
  return os.str();
}

Frame padded_frame(double xlo, double xhi, double ylo, double yhi) {
  if (!(xhi > xlo)) { xlo -= 0.5; xhi += 0.5; }
  if (!(yhi > ylo)) { ylo -= 0.5; yhi += 0.5; }
  return {xlo, xhi, ylo, yhi};
}

std::string scatter_svg(std::span<const double> xs, std::span<const double> ys, std::span<const std::uint8_t> labels,
                        const std::string& title, const std::string& xl, const std::string& yl) {
  auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  const Frame f = padded_frame(*xmin, *xmax, *ymin, *ymax);
  std::ostringstream os;
  os << svg_open(f, title, xl, yl);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    os << "<circle cx=\"" << f.px(xs[i]) << "\" cy=\"" << f.py(ys[i]) << "\" r=\"2\" fill=\""
       << (labels[i] ? kColorPos : kColorNeg) << "\" fill-opacity=\"0.5\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string histogram_svg(const ClassHistogram& h, const std::string& feature) {
  double ymax = 0.0;
  for (double d : h.density_neg) ymax = std::max(ymax, d);
  for (double d : h.density_pos) ymax = std::max(ymax, d);
  const Frame f = padded_frame(h.edges.front(), h.edges.back(), 0.0, ymax);
  std::ostringstream os;
  os << svg_open(f, feature + " by recoverability", feature, "density");
  auto bars = [&](const std::vector<double>& dens, const char* color) {
    for (std::size_t b = 0; b < dens.size(); ++b) {
      const double x = f.px(h.edges[b]), w = f.px(h.edges[b + 1]) - x;
      const double y = f.py(dens[b]), hgt = f.py(0.0) - y;
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << hgt << "\" fill=\""
         << color << "\" fill-opacity=\"0.45\"/>\n";
    }
  };
  bars(h.density_neg, kColorNeg);
  bars(h.density_pos, kColorPos);
  auto median_line = [&](const std::optional<double>& m, const char* color) {
    if (!m) return;
    os << "<line x1=\"" << f.px(*m) << "\" y1=\"" << f.py(0.0) << "\" x2=\"" << f.px(*m) << "\" y2=\"" << f.py(ymax)
       << "\" stroke=\"" << color << "\" stroke-dasharray=\"4 3\"/>\n";
  };
  median_line(h.median_neg, kColorNeg);
  median_line(h.median_pos, kColorPos);
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::vector<std::string> write_plots(const std::vector<dataset::RunRecord>& records, const Report& report,
                                     const std::string& dir, bool svg) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("plot directory '" + dir + "' does not exist");
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& body) {
    io::write_file((fs::path(dir) / name).string(), body);
    written.push_back(name);
  };
  const ml::Samples s = dataset::to_samples(records);
  const auto a_peak = s.x.column(0), h_norm = s.x.column(1), m1 = s.x.column(2), margin = s.x.column(3);

  auto scatter_csv = [&](std::span<const double> xs, std::span<const double> ys) {
    std::string out = "x,y,label\n";
    for (std::size_t i = 0; i < xs.size(); ++i) out += num(xs[i]) + "," + num(ys[i]) + "," + std::to_string(s.y[i]) + "\n";
    return out;
  };
  emit("scatter_apeak_hnorm.csv", scatter_csv(a_peak, h_norm));
  emit("scatter_margin_m1.csv", scatter_csv(margin, m1));
  if (svg) {
    emit("scatter_apeak_hnorm.svg", scatter_svg(a_peak, h_norm, s.y, "residual structure", "a_peak", "h_norm"));
    emit("scatter_margin_m1.svg", scatter_svg(margin, m1, s.y, "verified mass organization", "margin_frac", "m1_frac"));
  }

  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    const std::string name(kFeatureNames[j]);
    const auto col = s.x.column(j);
    const auto h = class_histogram(col, s.y, kHistogramBins);
    std::string out = "bin_left,bin_right,density_neg,density_pos\n";
    for (std::size_t b = 0; b < kHistogramBins; ++b) {
      out += num(h.edges[b]) + "," + num(h.edges[b + 1]) + "," + num(h.density_neg[b]) + "," + num(h.density_pos[b]) + "\n";
    }
    out += "median,," + (h.median_neg ? num(*h.median_neg) : "") + "," + (h.median_pos ? num(*h.median_pos) : "") + "\n";
    emit("hist_" + name + ".csv", out);
    if (svg) emit("hist_" + name + ".svg", histogram_svg(h, name));
  }

  if (report.cv && !report.cv->importance.mean_drop.empty()) {
    const auto& imp = report.cv->importance;
    std::string out = "feature,mean_drop,std_across_folds,std_across_repeats\n";
    for (std::size_t j = 0; j < imp.mean_drop.size(); ++j) {
      out += std::string(kFeatureNames[j]) + "," + num(imp.mean_drop[j]) + "," + num(imp.std_across_folds[j]) + "," +
             num(imp.mean_std_across_repeats[j]) + "\n";
    }
    emit("perm_importance.csv", out);
  }

  if (report.tree) {
    const auto& nodes = report.tree->nodes();
    std::string nodes_csv = "id,kind,feature,threshold,count_not_recoverable,count_recoverable,predicted\n";
    std::string edges_csv = "parent,child,condition\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      nodes_csv += std::to_string(i) + "," + (n.is_leaf() ? "leaf," : "split,") +
                   (n.is_leaf() ? "," : csv_escape(std::string(kFeatureNames[n.feature])) + "," + num(n.threshold)) + "," +
                   std::to_string(n.counts[0]) + "," + std::to_string(n.counts[1]) + "," +
                   (n.predicted_class() ? "recoverable" : "not_recoverable") + "\n";
      if (!n.is_leaf()) {
        edges_csv += std::to_string(i) + "," + std::to_string(n.left) + ",true\n";
        edges_csv += std::to_string(i) + "," + std::to_string(n.right) + ",false\n";
      }
    }
    emit("tree_nodes.csv", nodes_csv);
    emit("tree_edges.csv", edges_csv);
  }
  return written;
}

}  // namespace ofrec::analysis
