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

#include "ofrec/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ofrec/analysis.hpp"
#include "ofrec/dataset.hpp"
#include "ofrec/decoder.hpp"
#include "ofrec/errors.hpp"
#include "ofrec/features.hpp"
#include "ofrec/kernels.hpp"
#include "ofrec/serialize.hpp"
#include "ofrec/spectrum.hpp"

namespace ofrec::cli {

namespace {

using nlohmann::json;
using numtheory::u64;

// A flag value failed validation; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_output(const std::string& given, const std::string& fallback_name) {
  if (!given.empty()) return given;
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    return (std::filesystem::path(dir) / fallback_name).string();
  }
  return fallback_name;
}

std::string fmt6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::vector<spectrum::SectorTerm> parse_sectors(const std::string& spec) {
  std::vector<spectrum::SectorTerm> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    spectrum::SectorTerm term;
    char c1 = 0, c2 = 0;
    std::istringstream is(item);
    if (!(is >> term.h >> c1 >> term.nu >> c2 >> term.sigma) || c1 != ':' || c2 != ':' || !is.eof()) {
      throw UsageError("--sectors: expected h:nu:sigma, got '" + item + "'");
    }
    out.push_back(term);
  }
  return out;
}

struct InstanceFlags {
  u64 n = 0;
  u64 a = 0;
  unsigned t = 0;

  void add(CLI::App* app, bool t_required = true) {
    app->add_option("--N", n, "modulus N")->required();
    app->add_option("--a", a, "base a")->required();
    auto* opt = app->add_option("--t", t, "precision register size in qubits");
    if (t_required) opt->required();
  }
  dataset::InstanceDescriptor descriptor() const { return {n, a, t}; }
};

void add_threads(CLI::App* app, int& threads) {
  app->add_option("--threads", threads, "worker threads (default: OpenMP default)")->check(CLI::PositiveNumber);
}

void apply_threads(int threads) {
  if (threads > 0) kernels::set_worker_count(threads);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recoverability analysis for noisy quantum order finding", "ofrec"};
  app.require_subcommand(1);
  int threads = 0;

  // simulate
  auto* sim = app.add_subcommand("simulate", "synthesize a (noisy) precision-register spectrum");
  InstanceFlags sim_inst;
  sim_inst.add(sim);
  double epsilon = 0.0, sigma0 = 0.0, lambda = 0.0;
  std::string sectors_flag, kernel_name = "gaussian", sim_out;
  std::optional<u64> shots;
  u64 seed = 0;
  sim->add_option("--epsilon", epsilon, "leakage weight into competing sectors");
  sim->add_option("--sigma0", sigma0, "kernel width of the intended comb");
  sim->add_option("--sectors", sectors_flag, "competing sectors h:nu:sigma,... or 'auto'");
  sim->add_option("--lambda", lambda, "uniform admixture weight");
  sim->add_option("--kernel", kernel_name, "broadening kernel: gaussian or box");
  sim->add_option("--shots", shots, "finite shot count (omit for the exact distribution)");
  sim->add_option("--seed", seed, "sampling seed");
  sim->add_option("--out", sim_out, "output spectrum JSON");
  add_threads(sim, threads);

  // decode / features
  auto* dec = app.add_subcommand("decode", "decode a spectrum and report recoverability");
  InstanceFlags dec_inst;
  dec_inst.add(dec, false);
  std::string dec_in, rule_name = "last";
  dec->add_option("spectrum", dec_in, "spectrum JSON file")->required();
  dec->add_option("--candidate-rule", rule_name,
                  "candidate denominator per outcome: 'last' bounded convergent or 'smallest-verified'");

  auto* feat = app.add_subcommand("features", "compute the four recoverability features");
  InstanceFlags feat_inst;
  feat_inst.add(feat, false);
  std::string feat_in;
  feat->add_option("spectrum", feat_in, "spectrum JSON file")->required();

  // dataset
  auto* ds = app.add_subcommand("dataset", "generate, import and summarize run collections");
  ds->require_subcommand(1);
  auto* gen = ds->add_subcommand("generate", "synthetic sweep");
  std::string gen_config, gen_out;
  gen->add_option("--config", gen_config, "sweep config file (default: built-in benchmark sweep)");
  gen->add_option("--out", gen_out, "output dataset (JSON lines)");
  add_threads(gen, threads);
  auto* cfg_cmd = ds->add_subcommand("config", "print the built-in sweep config");
  auto* imp = ds->add_subcommand("import", "import a y,count histogram");
  InstanceFlags imp_inst;
  imp_inst.add(imp);
  std::string imp_in, imp_out;
  std::vector<std::string> imp_meta;
  imp->add_option("--in", imp_in, "histogram CSV")->required();
  imp->add_option("--out", imp_out, "output dataset (JSON lines)");
  imp->add_option("--meta", imp_meta, "metadata key=value (repeatable)");
  auto* summ = ds->add_subcommand("summarize", "dataset summary table");
  std::string summ_in;
  bool summ_json = false;
  summ->add_option("--in", summ_in, "dataset file")->required();
  summ->add_flag("--json", summ_json, "emit JSON instead of a table");

  // analyze
  auto* an = app.add_subcommand("analyze", "AUROC, forest, permutation importance and tree analysis");
  std::string an_in, an_out, plots_dir;
  analysis::AnalysisOptions opts;
  bool f_auroc = false, f_tree = false, f_forest = false, f_perm = false, svg = false;
  an->add_option("--in", an_in, "dataset file")->required();
  an->add_flag("--auroc", f_auroc, "single-feature AUROC table");
  an->add_flag("--tree", f_tree, "interpretable decision tree");
  an->add_flag("--forest", f_forest, "cross-validated random forest AUROC");
  an->add_flag("--perm", f_perm, "held-out permutation importance");
  an->add_option("--k", opts.folds, "cross-validation folds")->check(CLI::Range(2, 1000));
  an->add_option("--seed", opts.seed, "analysis seed");
  an->add_option("--out", an_out, "report JSON");
  an->add_option("--plots", plots_dir, "directory for plot CSV files");
  an->add_flag("--svg", svg, "also render SVG plots (with --plots)");
  an->add_option("--trees", opts.forest_params.n_trees, "forest size")->check(CLI::PositiveNumber);
  an->add_option("--max-features", opts.forest_params.max_features, "features per split (0: ceil(sqrt(d)))");
  an->add_option("--forest-max-depth", opts.forest_params.max_depth, "forest tree depth (-1: unlimited)");
  an->add_option("--tree-depth", opts.tree_params.max_depth, "depth of the interpretable tree (-1: unlimited)");
  an->add_option("--tree-min-leaf", opts.tree_params.min_samples_leaf, "minimum samples per tree leaf");
  an->add_option("--repeats", opts.perm_repeats, "permutation repeats per feature and fold")->check(CLI::PositiveNumber);
  add_threads(an, threads);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const bool analyzing = an->parsed();
  try {
    apply_threads(threads);
    if (sim->parsed()) {
      const auto instance = sim_inst.descriptor().resolve();
      spectrum::NoiseConfig cfg;
      cfg.epsilon = epsilon;
      cfg.sigma0 = sigma0;
      cfg.lambda_uniform = lambda;
      cfg.kernel = spectrum::kernel_family_from_string(kernel_name);
      cfg.shots = shots;
      cfg.seed = seed;
      if (sectors_flag == "auto") {
        cfg.sectors = spectrum::all_shift_sectors(instance, sigma0);
      } else {
        cfg.sectors = parse_sectors(sectors_flag);
      }
      const auto mixed = spectrum::noisy_mixture(instance, cfg);
      json doc;
      spectrum::Spectrum result = mixed;
      if (shots) {
        const auto counts = spectrum::sample_counts(mixed, *shots, seed);
        result = counts.to_spectrum();
        doc = io::to_json(counts);
      } else {
        doc = io::to_json(mixed);
      }
      const std::string path = default_output(sim_out, "spectrum.json");
      io::write_file(path, doc.dump() + "\n");
      out << "Q=" << instance.register_size() << " H_norm=" << fmt6(features::normalized_entropy(result))
          << " -> " << path << "\n";
      return kOk;
    }

    auto load_for = [](const std::string& path, InstanceFlags& flags) {
      auto doc = io::read_spectrum_file(path);
      if (flags.t == 0) flags.t = doc.spectrum.precision();
      if (flags.t != doc.spectrum.precision()) {
        throw UsageError("--t=" + std::to_string(flags.t) + " does not match the spectrum (t=" +
                         std::to_string(doc.spectrum.precision()) + ")");
      }
      return doc;
    };

    if (dec->parsed()) {
      auto doc = load_for(dec_in, dec_inst);
      const auto instance = dec_inst.descriptor().resolve();
      decoder::DecodeOptions dopts;
      if (rule_name == "smallest-verified") {
        dopts.rule = decoder::CandidateRule::kSmallestVerifiedConvergent;
      } else if (rule_name != "last") {
        throw UsageError("--candidate-rule must be 'last' or 'smallest-verified'");
      }
      const auto result = decoder::decode(doc.spectrum, instance, dopts);
      out << io::to_json(result).dump(2) << "\n";
      const bool ok = decoder::is_recoverable(result, instance.order());
      out << "recoverable: " << (ok ? "true" : "false") << " (";
      if (result.r_calc) {
        out << "r_calc=" << *result.r_calc << ", r_true=" << instance.order();
      } else {
        out << "M_ver=0";
      }
      out << ")\n";
      return kOk;
    }

    if (feat->parsed()) {
      auto doc = load_for(feat_in, feat_inst);
      const auto instance = feat_inst.descriptor().resolve();
      out << io::to_json(features::feature_vector(doc.spectrum, instance)).dump(2) << "\n";
      return kOk;
    }

    if (gen->parsed()) {
      const auto cfg = gen_config.empty() ? dataset::default_sweep()
                                          : dataset::parse_sweep_config(io::read_file(gen_config));
      const auto records = dataset::generate_sweep(cfg);
      const std::string path = default_output(gen_out, "dataset.jsonl");
      dataset::save_dataset(records, path);
      out << dataset::headline(dataset::summarize(records)) << " -> " << path << "\n";
      return kOk;
    }
    if (cfg_cmd->parsed()) {
      out << dataset::format_sweep_config(dataset::default_sweep());
      return kOk;
    }
    if (imp->parsed()) {
      std::map<std::string, std::string> meta;
      for (const auto& kv : imp_meta) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--meta expects key=value, got '" + kv + "'");
        meta[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      const auto record = dataset::import_histogram(imp_in, imp_inst.descriptor(), meta);
      const std::string path = default_output(imp_out, "imported.jsonl");
      dataset::save_dataset({record}, path);
      out << "recoverable: " << (record.recoverable ? "true" : "false") << " -> " << path << "\n";
      return kOk;
    }
    if (summ->parsed()) {
      const auto summary = dataset::summarize(dataset::load_dataset(summ_in));
      if (summ_json) {
        out << dataset::summary_to_json(summary).dump(2) << "\n";
      } else {
        out << dataset::render_summary(summary);
      }
      return kOk;
    }

    if (analyzing) {
      if (f_auroc || f_tree || f_forest || f_perm) {
        opts.auroc = f_auroc;
        opts.tree = f_tree;
        opts.forest = f_forest;
        opts.perm = f_perm;
      }
      const auto records = dataset::load_dataset(an_in);
      const auto report = analysis::analyze(records, opts);
      const std::string path = default_output(an_out, "report.json");
      io::write_file(path, analysis::report_to_json(report).dump(2) + "\n");
      if (!plots_dir.empty()) {
        std::filesystem::create_directories(plots_dir);
        analysis::write_plots(records, report, plots_dir, svg);
      }
      out << dataset::headline(report.summary) << "\n";
      for (const auto& s : report.single) {
        out << "AUROC " << s.feature << (s.negated ? " (negated)" : "") << " = " << fmt6(s.oriented) << "\n";
      }
      if (report.cv) {
        out << "forest cv AUROC = " << fmt6(report.cv->auroc.mean) << " +/- " << fmt6(report.cv->auroc.std) << "\n";
        const auto& imp_res = report.cv->importance;
        for (std::size_t j = 0; j < imp_res.mean_drop.size(); ++j) {
          out << "importance " << features::kFeatureNames[j] << " = " << fmt6(imp_res.mean_drop[j]) << " +/- "
              << fmt6(imp_res.std_across_folds[j]) << "\n";
        }
      }
      if (report.tree) out << ml::export_text(*report.tree, features::kFeatureNames);
      out << "report -> " << path << "\n";
      return kOk;
    }
  } catch (const UndefinedMetricError& e) {
    err << "error: " << e.what() << "\n";
    return analyzing ? kAnalysisDomain : kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return analyzing ? kAnalysisDomain : kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}

}  // namespace ofrec::cli
