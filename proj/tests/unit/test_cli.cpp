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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ofrec/cli.hpp"
#include "ofrec/dataset.hpp"
#include "ofrec/serialize.hpp"
#include "support/oracles.hpp"

using namespace ofrec;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

void write_spectrum(const std::string& path, const spectrum::Spectrum& spec) {
  io::write_file(path, io::to_json(spec).dump());
}

dataset::SweepConfig tiny_sweep() {
  auto cfg = dataset::default_sweep();
  cfg.moduli = {15, 63};
  cfg.shifts = {1, 2};
  cfg.precisions = {8};
  cfg.epsilons = {0.0, 0.8};
  cfg.sigmas = {0.0, 6.0};
  cfg.lambdas = {0.0, 0.7};
  cfg.shots = {1000};
  cfg.replicates = 3;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("usage errors exit with 2, help with 0") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"simulate", "--N", "15"}).code == cli::kUsage);
  CHECK(run({"simulate", "--N", "x", "--a", "2", "--t", "8"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
  const auto r = run({"simulate", "--N", "15", "--a", "3", "--t", "8", "--out", "/dev/null"});
  CHECK(r.code == cli::kUsage);
  CHECK(contains(r.err, "a=3"));
}

TEST_CASE("simulate writes a spectrum and a one-line summary") {
  oracle::TempDir dir("sim");
  const auto path = dir.file("s.json");
  const auto r = run({"simulate", "--N", "15", "--a", "2", "--t", "8", "--epsilon", "0", "--sigma0", "0", "--lambda",
                      "0", "--out", path});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "Q=256 H_norm=0.25"));
  const auto doc = io::read_spectrum_file(path);
  CHECK(doc.spectrum == spectrum::ideal_spectrum(numtheory::Instance::make(15, 2, 8)));

  const std::vector<std::string> noisy{"simulate", "--N", "63", "--a", "2", "--t", "8", "--epsilon", "0.5",
                                       "--sectors", "auto", "--sigma0", "2", "--shots", "4000", "--seed", "7"};
  auto first = noisy, second = noisy;
  first.insert(first.end(), {"--out", dir.file("a.json")});
  second.insert(second.end(), {"--out", dir.file("b.json")});
  REQUIRE(run(first).code == 0);
  REQUIRE(run(second).code == 0);
  CHECK(io::read_file(dir.file("a.json")) == io::read_file(dir.file("b.json")));
  CHECK(io::read_spectrum_file(dir.file("a.json")).counts.has_value());

  CHECK(run({"simulate", "--N", "15", "--a", "2", "--t", "8", "--epsilon", "0.5", "--sectors", "2:0.5:0,3:0.5:1",
             "--out", dir.file("c.json")})
            .code == 0);
  const auto bad = run({"simulate", "--N", "15", "--a", "2", "--t", "8", "--epsilon", "0.5", "--sectors", "2-0.5",
                        "--out", dir.file("d.json")});
  CHECK(bad.code == cli::kUsage);
  CHECK(contains(bad.err, "--sectors"));
  CHECK(run({"simulate", "--N", "15", "--a", "2", "--t", "8", "--lambda", "2", "--out", dir.file("e.json")}).code ==
        cli::kUsage);
}

TEST_CASE("output directory from the environment") {
  oracle::TempDir dir("env");
  ::setenv(cli::kOutputDirEnv, dir.path().c_str(), 1);
  const auto r = run({"simulate", "--N", "7", "--a", "2", "--t", "6"});
  ::unsetenv(cli::kOutputDirEnv);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir.path() / "spectrum.json"));
}

TEST_CASE("decode verdict lines") {
  oracle::TempDir dir("decode");
  write_spectrum(dir.file("ideal.json"), spectrum::ideal_spectrum(numtheory::Instance::make(15, 2, 8)));
  auto r = run({"decode", dir.file("ideal.json"), "--N", "15", "--a", "2", "--t", "8"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "recoverable: true (r_calc=4, r_true=4)"));
  CHECK(contains(r.out, "\"masses\""));

  std::vector<double> p(256, 0.0);
  p[32] = 0.6;
  p[128] = 0.4;
  write_spectrum(dir.file("fail.json"), spectrum::Spectrum::from_probs(8, p));
  r = run({"decode", dir.file("fail.json"), "--N", "15", "--a", "4", "--t", "8"});
  CHECK(contains(r.out, "recoverable: false (r_calc=8, r_true=2)"));

  write_spectrum(dir.file("zero.json"), spectrum::Spectrum::point_mass(8, 0));
  r = run({"decode", dir.file("zero.json"), "--N", "15", "--a", "2"});
  CHECK(contains(r.out, "recoverable: false (M_ver=0)"));

  r = run({"decode", dir.file("zero.json"), "--N", "15", "--a", "2", "--t", "9"});
  CHECK(r.code == cli::kUsage);
  CHECK(contains(r.err, "--t"));
  CHECK(run({"decode", dir.file("missing.json"), "--N", "15", "--a", "2"}).code == cli::kIo);
  io::write_file(dir.file("junk.json"), "{not json");
  CHECK(run({"decode", dir.file("junk.json"), "--N", "15", "--a", "2"}).code == cli::kIo);
  CHECK(run({"decode", dir.file("ideal.json"), "--N", "15", "--a", "2", "--candidate-rule", "smallest-verified"})
            .code == 0);
  CHECK(run({"decode", dir.file("ideal.json"), "--N", "15", "--a", "2", "--candidate-rule", "best"}).code ==
        cli::kUsage);
}

TEST_CASE("features subcommand") {
  oracle::TempDir dir("features");
  write_spectrum(dir.file("ideal.json"), spectrum::ideal_spectrum(numtheory::Instance::make(15, 2, 8)));
  const auto r = run({"features", dir.file("ideal.json"), "--N", "15", "--a", "2", "--t", "8"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["h_norm"].get<double>() == doctest::Approx(0.25));
  CHECK(j["m1_frac"].get<double>() == 1.0);
}

TEST_CASE("dataset import and summarize") {
  oracle::TempDir dir("dataset");
  io::write_file(dir.file("h.csv"), "y,count\n64,2000\n192,2000\n");
  auto r = run({"dataset", "import", "--in", dir.file("h.csv"), "--N", "15", "--a", "2", "--t", "8", "--meta",
                "backend=sim", "--out", dir.file("d.jsonl")});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "recoverable: true"));
  r = run({"dataset", "summarize", "--in", dir.file("d.jsonl")});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "1 (100.0%)"));
  r = run({"dataset", "summarize", "--in", dir.file("d.jsonl"), "--json"});
  CHECK(nlohmann::json::parse(r.out)["total"] == 1);

  io::write_file(dir.file("bad.csv"), "64,1\n300,5\n");
  r = run({"dataset", "import", "--in", dir.file("bad.csv"), "--N", "15", "--a", "2", "--t", "8", "--out",
           dir.file("x.jsonl")});
  CHECK(r.code == cli::kIo);
  CHECK(contains(r.err, "at line 2"));
  CHECK(run({"dataset", "import", "--in", dir.file("h.csv"), "--N", "15", "--a", "2", "--t", "8", "--meta", "novalue",
             "--out", dir.file("y.jsonl")})
            .code == cli::kUsage);
  CHECK(run({"dataset"}).code == cli::kUsage);
  r = run({"dataset", "config"});
  CHECK(contains(r.out, "moduli = 3, 7, 15, 31, 63, 127"));
}

TEST_CASE("dataset generate from a config file") {
  oracle::TempDir dir("generate");
  io::write_file(dir.file("c.txt"), dataset::format_sweep_config(tiny_sweep()));
  auto r = run({"dataset", "generate", "--config", dir.file("c.txt"), "--out", dir.file("a.jsonl"), "--threads", "2"});
  REQUIRE(r.code == 0);
  r = run({"dataset", "generate", "--config", dir.file("c.txt"), "--out", dir.file("b.jsonl"), "--threads", "1"});
  REQUIRE(r.code == 0);
  CHECK(io::read_file(dir.file("a.jsonl")) == io::read_file(dir.file("b.jsonl")));
  io::write_file(dir.file("bad.txt"), "moduli = 15\nwhat = 1\n");
  r = run({"dataset", "generate", "--config", dir.file("bad.txt"), "--out", dir.file("c.jsonl")});
  CHECK(r.code == cli::kIo);
  CHECK(contains(r.err, "line 2"));
}

TEST_CASE("analyze writes a report and plot data") {
  oracle::TempDir dir("analyze");
  dataset::save_dataset(dataset::generate_sweep(tiny_sweep()), dir.file("d.jsonl"));
  const std::vector<std::string> base{"analyze", "--in", dir.file("d.jsonl"), "--k", "3", "--seed", "5",
                                      "--trees", "30", "--repeats", "2"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", dir.file("r1.json"), "--plots", dir.file("plots"), "--svg"});
  b.insert(b.end(), {"--out", dir.file("r2.json")});
  const auto r = run(a);
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "forest cv AUROC"));
  REQUIRE(run(b).code == 0);
  CHECK(io::read_file(dir.file("r1.json")) == io::read_file(dir.file("r2.json")));

  const auto report = nlohmann::json::parse(io::read_file(dir.file("r1.json")));
  CHECK(report["features"] == nlohmann::json({"a_peak", "h_norm", "m1_frac", "margin_frac"}));
  for (const auto& row : report["single_feature_auroc"]["table"]) {
    CHECK(row["auroc"].get<double>() >= 0.0);
    CHECK(row["auroc"].get<double>() <= 1.0);
  }
  CHECK(report["forest_cv"]["fold_auroc"].size() == 3);
  CHECK(report.contains("tree"));

  const fs::path plots = dir.file("plots");
  for (const char* f : {"scatter_apeak_hnorm.csv", "scatter_margin_m1.csv", "hist_h_norm.csv", "perm_importance.csv",
                        "tree_nodes.csv", "tree_edges.csv", "hist_a_peak.svg", "scatter_margin_m1.svg"}) {
    CHECK_MESSAGE(fs::exists(plots / f), f);
  }
  const auto hist = io::read_file((plots / "hist_m1_frac.csv").string());
  CHECK(hist.rfind("bin_left,bin_right,density_neg,density_pos\n", 0) == 0);
  CHECK(contains(hist, "\nmedian,"));
  const auto scatter = io::read_file((plots / "scatter_apeak_hnorm.csv").string());
  CHECK(scatter.rfind("x,y,label\n", 0) == 0);

  auto only = base;
  only.insert(only.end(), {"--auroc", "--out", dir.file("r3.json")});
  REQUIRE(run(only).code == 0);
  const auto partial = nlohmann::json::parse(io::read_file(dir.file("r3.json")));
  CHECK(partial.contains("single_feature_auroc"));
  CHECK(!partial.contains("forest_cv"));
}

TEST_CASE("analyze on single-class data exits with 3") {
  oracle::TempDir dir("single");
  const dataset::InstanceDescriptor desc{15, 2, 8};
  std::vector<dataset::RunRecord> recs;
  for (int i = 0; i < 10; ++i) {
    recs.push_back(dataset::make_record(desc, std::nullopt, 0, spectrum::ideal_spectrum(desc.resolve())));
  }
  dataset::save_dataset(recs, dir.file("d.jsonl"));
  const auto r = run({"analyze", "--in", dir.file("d.jsonl"), "--out", dir.file("r.json")});
  CHECK(r.code == cli::kAnalysisDomain);
  CHECK(contains(r.err, "AUROC undefined for single-class data"));
  CHECK(run({"analyze", "--in", dir.file("none.jsonl")}).code == cli::kIo);
}
