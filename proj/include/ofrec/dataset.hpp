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
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ofrec/decoder.hpp"
#include "ofrec/features.hpp"
#include "ofrec/ml/matrix.hpp"
#include "ofrec/spectrum.hpp"

namespace ofrec::dataset {

using numtheory::u64;

/// (N, a, t) as written in the grid; `a` is kept unreduced so summaries
/// group by the nominal base.
struct InstanceDescriptor {
  u64 modulus = 0;
  u64 base = 0;
  unsigned precision = 0;

  numtheory::Instance resolve() const { return numtheory::Instance::make(modulus, base, precision); }
  friend bool operator==(const InstanceDescriptor&, const InstanceDescriptor&) = default;
};

/// Counts for finite-shot runs, probabilities otherwise.
using StoredSpectrum = std::variant<spectrum::Counts, spectrum::Spectrum>;

struct RunRecord {
  InstanceDescriptor instance;
  std::optional<spectrum::NoiseConfig> noise;  // absent for imported runs
  std::optional<u64> shots;                    // absent: infinite shots
  u64 seed = 0;
  StoredSpectrum spectrum;
  decoder::DecodeResult decode;
  features::FeatureVector features;
  u64 r_true = 0;
  bool recoverable = false;
  std::map<std::string, std::string> metadata;

  spectrum::Spectrum distribution() const;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Decodes, extracts features and labels a run.
RunRecord make_record(const InstanceDescriptor& desc, std::optional<spectrum::NoiseConfig> noise,
                      u64 seed, StoredSpectrum stored, std::map<std::string, std::string> metadata = {});

/// True when decode, features and label recompute exactly from the stored
/// spectrum.
bool is_consistent(const RunRecord& record);

// ---------------------------------------------------------------------------
// Synthetic sweeps

enum class SectorPolicy {
  kAllShifts,  // every other shift of N = 2^n - 1, uniform weights
  kNone,
};

struct SweepConfig {
  std::vector<u64> moduli;
  /// Shift exponents s; the base is a = 2^s (reduced mod N by the instance).
  std::vector<unsigned> shifts;
  std::vector<unsigned> precisions;
  std::vector<double> epsilons;
  std::vector<double> sigmas;
  std::vector<double> lambdas;
  /// Width of the competing-sector kernels; nullopt reuses sigma0.
  std::optional<double> sector_sigma;
  SectorPolicy sector_policy = SectorPolicy::kAllShifts;
  spectrum::KernelFamily kernel = spectrum::KernelFamily::kGaussian;
  /// nullopt entries mean infinite shots.
  std::vector<std::optional<u64>> shots;
  std::size_t replicates = 1;
  u64 seed = 0;
  bool include_degenerate = false;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

/// The benchmark family N in {3,...,127}, a in {2,4,8,16}, t in {8,10},
/// eps in {0,.2,.5,.8}, sigma0 in {0,2,6}, lambda in {0,.3,.7}, 4000 shots,
/// 5 replicates.
SweepConfig default_sweep();

/// Parses the key = value sweep format (see docs/sweep_config.md).
SweepConfig parse_sweep_config(const std::string& text);
std::string format_sweep_config(const SweepConfig& cfg);

/// One record per grid cell and replicate, in grid order. Cells are
/// generated in parallel; per-record seeds depend only on the master seed,
/// the cell index within the full grid and the replicate.
std::vector<RunRecord> generate_sweep(const SweepConfig& cfg);

// ---------------------------------------------------------------------------
// Import, persistence, summaries

/// Reads a "y,count" histogram. '#' lines are comments; "# key=value"
/// comments become metadata. Errors carry the offending line number.
RunRecord import_histogram_text(const std::string& text, const InstanceDescriptor& desc,
                                std::map<std::string, std::string> metadata = {});
RunRecord import_histogram(const std::string& path, const InstanceDescriptor& desc,
                           std::map<std::string, std::string> metadata = {});
std::vector<RunRecord> import_histograms(
    const std::vector<std::pair<std::string, InstanceDescriptor>>& inputs);

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kSchemaName = "ofrec.dataset";

nlohmann::json record_to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);

/// Schema header line followed by one JSON record per line.
std::string serialize_dataset(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_dataset(const std::string& text);
void save_dataset(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> load_dataset(const std::string& path);

struct GroupCount {
  std::size_t total = 0;
  std::size_t recoverable = 0;
  friend bool operator==(const GroupCount&, const GroupCount&) = default;
};

struct Summary {
  std::size_t total = 0;
  std::size_t recoverable = 0;
  std::size_t non_recoverable = 0;
  std::map<u64, GroupCount> by_modulus;
  std::map<u64, GroupCount> by_base;
  std::map<unsigned, GroupCount> by_precision;
  std::map<std::string, std::map<std::string, GroupCount>> by_metadata;
};

Summary summarize(const std::vector<RunRecord>& records);

/// "45.6%" style, one decimal.
std::string format_percent(std::size_t part, std::size_t whole);
/// "310 (45.6%)"
std::string format_count(std::size_t part, std::size_t whole);
/// "4 total, 2 (50.0%), 2 (50.0%)": total, recoverable, non-recoverable.
std::string headline(const Summary& summary);
std::string render_summary(const Summary& summary);
nlohmann::json summary_to_json(const Summary& summary);

/// Feature matrix (canonical order) and labels.
ml::Samples to_samples(const std::vector<RunRecord>& records);

}  // namespace ofrec::dataset
