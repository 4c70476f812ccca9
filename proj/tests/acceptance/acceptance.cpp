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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ofrec/analysis.hpp"
#include "ofrec/dataset.hpp"
#include "ofrec/decoder.hpp"
#include "ofrec/features.hpp"
#include "ofrec/kernels.hpp"
#include "ofrec/ml/auroc.hpp"
#include "ofrec/ml/tree.hpp"
#include "ofrec/ml/validation.hpp"
#include "ofrec/random.hpp"
#include "ofrec/spectrum.hpp"
#include "support/oracles.hpp"

using namespace ofrec;
using numtheory::Instance;
using spectrum::Spectrum;

namespace {

// Pinned budgets and tolerances.
constexpr double kBudgetNoiselessSec = 5.0;
constexpr double kBudgetOracleSec = 30.0;
constexpr double kBudgetAurocSec = 10.0;
constexpr double kBudgetPipelineSec = 300.0;
constexpr double kFixtureTol = 1e-12;
constexpr double kThresholdTol = 0.05;
constexpr double kForestSlack = 0.02;
constexpr double kMinOrientedAuroc = 0.6;
constexpr double kMinSignalImportance = 0.4;

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome noiseless_recoverability() {
  const auto start = Clock::now();
  std::size_t checked = 0, failed = 0;
  for (std::uint64_t n : {3, 7, 15, 31, 63, 127}) {
    for (std::uint64_t a : {2, 4, 8, 16}) {
      if (a % n == 1) continue;
      for (unsigned t : {8u, 10u}) {
        const auto inst = Instance::make(n, a, t);
        const auto r = decoder::decode(spectrum::ideal_spectrum(inst), inst);
        ++checked;
        if (r.r_calc != inst.order() || !decoder::is_recoverable(r, inst.order())) ++failed;
      }
    }
  }
  const double sec = seconds_since(start);
  return {failed == 0 && sec < kBudgetNoiselessSec,
          std::to_string(checked) + " instances, " + std::to_string(failed) + " failures, " + fmt("%.2f s", sec)};
}

Spectrum random_spectrum(Rng& rng, unsigned t, bool sparse) {
  std::vector<double> p(std::size_t{1} << t, 0.0);
  if (sparse) {
    const auto support = 1 + rng.below(8);
    for (std::uint64_t i = 0; i < support; ++i) p[rng.below(p.size())] += static_cast<double>(1 + rng.below(4000));
  } else {
    for (auto& v : p) v = rng.uniform01() < 0.1 ? 0.0 : rng.uniform01();
    p[rng.below(p.size())] += 1.0;
  }
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= s;
  return Spectrum::from_probs(t, std::move(p));
}

Outcome decoder_oracle() {
  const auto start = Clock::now();
  Rng rng(derive_seed(2, 0));
  const std::vector<std::uint64_t> moduli{3, 7, 15, 31, 63, 127, 21, 255};
  std::size_t mismatches = 0;
  constexpr int kSpectra = 500;
  for (int i = 0; i < kSpectra; ++i) {
    const auto n = moduli[rng.below(moduli.size())];
    std::uint64_t a = 0;
    do {
      a = 1 + rng.below(n - 1);
    } while (numtheory::gcd(a, n) != 1);
    const unsigned t = 1 + static_cast<unsigned>(rng.below(10));
    const auto inst = Instance::make(n, a, t);
    const auto spec = random_spectrum(rng, t, i % 2 == 0);
    const auto got = decoder::decode(spec, inst);
    const auto ref = oracle::decode_naive(spec.probs(), n, inst.base());
    bool same = got.r_calc == ref.r_calc && got.m_ver == ref.m_ver && got.m1 == ref.m1 && got.m2 == ref.m2;
    for (std::uint64_t r = 1; r <= n && same; ++r) {
      const auto it = got.mass_map.entries.find(r);
      same = (it == got.mass_map.entries.end() ? 0.0 : it->second) == ref.mass[r];
    }
    mismatches += !same;
  }
  const double sec = seconds_since(start);
  return {mismatches == 0 && sec < kBudgetOracleSec, std::to_string(kSpectra) + " spectra, " +
                                                        std::to_string(mismatches) + " mismatches, " +
                                                        fmt("%.2f s", sec)};
}

Outcome feature_fixtures() {
  const auto inst = Instance::make(15, 2, 8);
  const auto fv = features::feature_vector(spectrum::ideal_spectrum(inst), inst);
  const double comb_err = std::max({std::abs(fv.a_peak - 1.0), std::abs(fv.h_norm - 0.25), std::abs(fv.m1_frac - 1.0),
                                    std::abs(fv.margin_frac - 1.0)});
  const double point_err = std::abs(features::autocorr_peak(Spectrum::point_mass(8, 0)) + 1.0 / 255.0);
  const double uniform_err = std::abs(features::normalized_entropy(Spectrum::uniform(8)) - 1.0);
  const double worst = std::max({comb_err, point_err, uniform_err});
  return {worst <= kFixtureTol, "max deviation " + fmt("%.3g", worst)};
}

Outcome failure_fixture() {
  const auto inst = Instance::make(15, 4, 8);
  std::vector<double> p(256, 0.0);
  p[32] = 0.6;
  p[128] = 0.4;
  const auto spec = Spectrum::from_probs(8, p);
  const auto r = decoder::decode(spec, inst);
  const auto fv = features::feature_vector(spec, r);
  const bool ok = r.r_calc == 8u && inst.order() == 2 && !decoder::is_recoverable(r, inst.order()) &&
                  std::abs(fv.m1_frac - 0.6) <= kFixtureTol && std::abs(fv.margin_frac - 0.2) <= kFixtureTol;
  return {ok, "r_calc=" + (r.r_calc ? std::to_string(*r.r_calc) : std::string("none")) +
                  " r_true=" + std::to_string(inst.order()) + fmt(" m1_frac=%.12g", fv.m1_frac) +
                  fmt(" margin_frac=%.12g", fv.margin_frac)};
}

Outcome auroc_exact() {
  const auto start = Clock::now();
  Rng rng(derive_seed(5, 0));
  std::size_t mismatches = 0;
  constexpr int kSets = 200;
  for (int i = 0; i < kSets; ++i) {
    const std::size_t n = 2 + rng.below(499);
    const auto levels = 1 + rng.below(50);
    std::vector<double> s(n);
    ml::Labels y(n);
    for (std::size_t j = 0; j < n; ++j) {
      s[j] = static_cast<double>(rng.below(levels)) * 0.37;
      y[j] = static_cast<std::uint8_t>(rng.below(2));
    }
    y[0] = 0;
    y[1] = 1;
    mismatches += ml::auroc(s, y) != oracle::auroc_pairs(s, y);
  }
  const double sec = seconds_since(start);
  return {mismatches == 0 && sec < kBudgetAurocSec,
          std::to_string(kSets) + " sets, " + std::to_string(mismatches) + " mismatches, " + fmt("%.2f s", sec)};
}

Outcome tree_threshold() {
  constexpr std::size_t kTarget = 2;  // m1_frac column
  int hits = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(6, seed));
    ml::Samples s;
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> row(4);
      for (auto& v : row) v = rng.uniform01();
      bool label = row[kTarget] > 0.5;
      if (rng.uniform01() < 0.05) label = !label;
      s.x.push_row(row);
      s.y.push_back(label ? 1 : 0);
    }
    const auto tree = ml::fit_tree(s);
    const auto& root = tree.nodes().front();
    const double dev = root.is_leaf() ? 1.0 : std::abs(root.threshold - 0.5);
    worst = std::max(worst, dev);
    hits += root.feature == static_cast<int>(kTarget) && dev <= kThresholdTol;
  }
  return {hits == 10, std::to_string(hits) + "/10 seeds, worst |threshold-0.5| = " + fmt("%.4f", worst)};
}

Outcome permutation_null_signal() {
  Rng rng(derive_seed(7, 0));
  ml::Samples train, heldout;
  for (int i = 0; i < 1000; ++i) {
    const double label = i % 2;
    const std::vector<double> row{rng.uniform01(), label};
    auto& dst = i < 500 ? train : heldout;
    dst.x.push_row(row);
    dst.y.push_back(static_cast<std::uint8_t>(label));
  }
  ml::TreeParams p;
  p.max_depth = 1;
  const auto tree = ml::fit_tree(train, p);
  const bool absent = !tree.split_features().count(0);
  const auto null_imp = ml::permutation_importance(tree, heldout, 0, 10, 1);
  const auto signal = ml::permutation_importance(tree, heldout, 1, 10, 1);
  const bool null_exact = std::all_of(null_imp.drops.begin(), null_imp.drops.end(), [](double d) { return d == 0.0; });
  return {absent && null_exact && signal.mean_drop >= kMinSignalImportance,
          fmt("null drop %.3g", null_imp.mean_drop) + fmt(", signal drop %.4f", signal.mean_drop)};
}

struct PipelineRun {
  std::string dataset;
  std::string report;
  analysis::Report parsed;
  double seconds = 0.0;
};

PipelineRun run_pipeline(int workers) {
  kernels::set_worker_count(workers);
  const auto start = Clock::now();
  const auto records = dataset::generate_sweep(dataset::default_sweep());
  analysis::AnalysisOptions opts;
  opts.seed = 20260416;
  opts.forest_params.seed = 20260416;
  auto report = analysis::analyze(records, opts);
  PipelineRun run;
  run.dataset = dataset::serialize_dataset(records);
  run.report = analysis::report_to_json(report).dump(2);
  run.parsed = std::move(report);
  run.seconds = seconds_since(start);
  return run;
}

Outcome pipeline_properties(const PipelineRun& run) {
  const auto& rep = run.parsed;
  double best_single = 0.0, worst_single = 1.0;
  std::ostringstream singles;
  for (const auto& s : rep.single) {
    best_single = std::max(best_single, s.oriented);
    worst_single = std::min(worst_single, s.oriented);
    singles << s.feature << "=" << fmt("%.4f", s.oriented) << " ";
  }
  const double forest = rep.cv ? rep.cv->auroc.mean : 0.0;
  const bool forest_ok = forest >= best_single - kForestSlack;
  const bool singles_ok = worst_single >= kMinOrientedAuroc;
  const bool time_ok = run.seconds < kBudgetPipelineSec;
  std::string detail = std::to_string(rep.summary.total) + " runs (" + std::to_string(rep.summary.non_recoverable) +
                       " non-recoverable); forest cv " + fmt("%.4f", forest) + " vs best single " +
                       fmt("%.4f", best_single) + (forest_ok ? " ok" : " LOW") + "; single " + singles.str() +
                       (singles_ok ? "ok" : "BELOW " + fmt("%.2f", kMinOrientedAuroc)) + "; " +
                       fmt("%.1f s", run.seconds);
  return {forest_ok && singles_ok && time_ok, detail};
}

Outcome determinism(const PipelineRun& a, const PipelineRun& b) {
  const bool same_data = a.dataset == b.dataset;
  const bool same_report = a.report == b.report;
  return {same_data && same_report, std::string("dataset ") + (same_data ? "identical" : "DIFFERS") + " (" +
                                        std::to_string(a.dataset.size()) + " bytes), report " +
                                        (same_report ? "identical" : "DIFFERS") + ", workers 1 vs 4"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  report(1, "noiseless recoverability", noiseless_recoverability());
  report(2, "decoder oracle equivalence", decoder_oracle());
  report(3, "feature fixtures", feature_fixtures());
  report(4, "incorrect-period fixture", failure_fixture());
  report(5, "AUROC exactness", auroc_exact());
  report(6, "tree threshold recovery", tree_threshold());
  report(7, "permutation importance null/signal", permutation_null_signal());
  const auto serial = run_pipeline(1);
  report(8, "end-to-end pipeline", pipeline_properties(serial));
  const auto parallel = run_pipeline(4);
  report(9, "determinism", determinism(serial, parallel));
  return failures;
}
