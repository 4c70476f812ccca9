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

#include "ofrec/dataset.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <exception>
#include <sstream>

#include "ofrec/errors.hpp"
#include "ofrec/random.hpp"
#include "ofrec/serialize.hpp"

namespace ofrec::dataset {

using nlohmann::json;
using spectrum::Counts;
using spectrum::NoiseConfig;
using spectrum::Spectrum;

spectrum::Spectrum RunRecord::distribution() const {
  if (const auto* c = std::get_if<Counts>(&spectrum)) return c->to_spectrum();
  return std::get<Spectrum>(spectrum);
}

RunRecord make_record(const InstanceDescriptor& desc, std::optional<NoiseConfig> noise, u64 seed,
                      StoredSpectrum stored, std::map<std::string, std::string> metadata) {
  const auto instance = desc.resolve();
  RunRecord rec;
  rec.instance = desc;
  rec.noise = std::move(noise);
  rec.seed = seed;
  if (const auto* c = std::get_if<Counts>(&stored)) rec.shots = c->shots;
  rec.spectrum = std::move(stored);
  const Spectrum dist = rec.distribution();
  if (dist.size() != instance.register_size()) {
    throw DomainError("spectrum has " + std::to_string(dist.size()) + " outcomes, expected Q=" +
                      std::to_string(instance.register_size()));
  }
  rec.decode = decoder::decode(dist, instance);
  rec.features = features::feature_vector(dist, rec.decode);
  rec.r_true = instance.order();
  rec.recoverable = decoder::is_recoverable(rec.decode, rec.r_true);
  rec.metadata = std::move(metadata);
  return rec;
}

bool is_consistent(const RunRecord& record) {
  const RunRecord again =
      make_record(record.instance, record.noise, record.seed, record.spectrum, record.metadata);
  return again == record;
}

// ---------------------------------------------------------------------------
// Sweeps

SweepConfig default_sweep() {
  SweepConfig cfg;
  cfg.moduli = {3, 7, 15, 31, 63, 127};
  cfg.shifts = {1, 2, 3, 4};
  cfg.precisions = {8, 10};
  cfg.epsilons = {0.0, 0.2, 0.5, 0.8};
  cfg.sigmas = {0.0, 2.0, 6.0};
  cfg.lambdas = {0.0, 0.3, 0.7};
  cfg.shots = {u64{4000}};
  cfg.replicates = 5;
  cfg.seed = 20260416;
  return cfg;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(value);
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(const std::string& s) {
  T v{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

// std::from_chars for double is missing from some standard libraries still in
// use; strtod is locale-sensitive but the tools never change the C locale.
std::optional<double> parse_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

std::string format_real(double v) { return json(v).dump(); }

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    std::string line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& text) {
  SweepConfig cfg = default_sweep();
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("expected 'key = value' at line " + std::to_string(lineno), lineno);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto items = split_list(value);
    auto bad = [&](const std::string& what) {
      return FormatError("invalid " + what + " '" + value + "' for key '" + key + "' at line " +
                             std::to_string(lineno),
                         lineno);
    };
    auto ints = [&]() {
      std::vector<u64> out;
      for (const auto& it : items) {
        auto v = parse_number<u64>(it);
        if (!v) throw bad("integer list");
        out.push_back(*v);
      }
      return out;
    };
    auto reals = [&]() {
      std::vector<double> out;
      for (const auto& it : items) {
        auto v = parse_real(it);
        if (!v) throw bad("number list");
        out.push_back(*v);
      }
      return out;
    };
    auto single_int = [&]() {
      auto v = ints();
      if (v.size() != 1) throw bad("integer");
      return v[0];
    };
    auto boolean = [&]() {
      if (value == "true" || value == "1") return true;
      if (value == "false" || value == "0") return false;
      throw bad("boolean");
    };

    if (key == "moduli") {
      cfg.moduli = ints();
    } else if (key == "shifts") {
      cfg.shifts.clear();
      for (auto v : ints()) cfg.shifts.push_back(static_cast<unsigned>(v));
    } else if (key == "precisions") {
      cfg.precisions.clear();
      for (auto v : ints()) cfg.precisions.push_back(static_cast<unsigned>(v));
    } else if (key == "epsilon") {
      cfg.epsilons = reals();
    } else if (key == "sigma") {
      cfg.sigmas = reals();
    } else if (key == "lambda") {
      cfg.lambdas = reals();
    } else if (key == "sector_sigma") {
      if (value == "same") {
        cfg.sector_sigma.reset();
      } else {
        auto v = parse_real(value);
        if (!v) throw bad("number");
        cfg.sector_sigma = *v;
      }
    } else if (key == "shots") {
      cfg.shots.clear();
      for (const auto& it : items) {
        if (it == "inf") {
          cfg.shots.push_back(std::nullopt);
        } else {
          auto v = parse_number<u64>(it);
          if (!v || *v == 0) throw bad("shots list");
          cfg.shots.push_back(*v);
        }
      }
    } else if (key == "replicates") {
      cfg.replicates = single_int();
    } else if (key == "seed") {
      cfg.seed = single_int();
    } else if (key == "sector_policy") {
      if (value == "all_shifts") {
        cfg.sector_policy = SectorPolicy::kAllShifts;
      } else if (value == "none") {
        cfg.sector_policy = SectorPolicy::kNone;
      } else {
        throw bad("sector policy");
      }
    } else if (key == "kernel") {
      try {
        cfg.kernel = spectrum::kernel_family_from_string(value);
      } catch (const DomainError&) {
        throw bad("kernel family");
      }
    } else if (key == "include_degenerate") {
      cfg.include_degenerate = boolean();
    } else {
      throw FormatError("unknown key '" + key + "' at line " + std::to_string(lineno), lineno);
    }
  }
  return cfg;
}

std::string format_sweep_config(const SweepConfig& cfg) {
  std::ostringstream os;
  auto list = [&](const char* key, const auto& values, auto fmt) {
    os << key << " = ";
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? ", " : "") << fmt(values[i]);
    os << "\n";
  };
  auto num = [](auto v) { return std::to_string(v); };
  list("moduli", cfg.moduli, num);
  list("shifts", cfg.shifts, num);
  list("precisions", cfg.precisions, num);
  list("epsilon", cfg.epsilons, format_real);
  list("sigma", cfg.sigmas, format_real);
  list("lambda", cfg.lambdas, format_real);
  os << "sector_sigma = " << (cfg.sector_sigma ? format_real(*cfg.sector_sigma) : "same") << "\n";
  list("shots", cfg.shots, [](const std::optional<u64>& s) { return s ? std::to_string(*s) : std::string("inf"); });
  os << "replicates = " << cfg.replicates << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "sector_policy = " << (cfg.sector_policy == SectorPolicy::kAllShifts ? "all_shifts" : "none") << "\n";
  os << "kernel = " << spectrum::to_string(cfg.kernel) << "\n";
  os << "include_degenerate = " << (cfg.include_degenerate ? "true" : "false") << "\n";
  return os.str();
}

namespace {

struct Job {
  InstanceDescriptor desc;
  numtheory::Instance instance;
  NoiseConfig noise;
  u64 seed;
};

}  // namespace

std::vector<RunRecord> generate_sweep(const SweepConfig& cfg) {
  if (cfg.moduli.empty() || cfg.shifts.empty() || cfg.precisions.empty() || cfg.epsilons.empty() ||
      cfg.sigmas.empty() || cfg.lambdas.empty() || cfg.shots.empty() || cfg.replicates == 0) {
    throw DomainError("sweep: every grid must be non-empty and replicates positive");
  }
  std::vector<Job> jobs;
  u64 cell = 0;
  for (u64 n : cfg.moduli) {
    for (unsigned s : cfg.shifts) {
      for (unsigned t : cfg.precisions) {
        std::optional<numtheory::Instance> instance;
        const u64 base = n >= 2 ? numtheory::mod_pow(2, s, n) : 0;
        if (n >= 2 && s < 64 && numtheory::gcd(base, n) == 1) {
          instance = numtheory::Instance::make(n, base, t);
        }
        const bool usable = instance && (cfg.include_degenerate || !instance->degenerate());
        for (double eps : cfg.epsilons) {
          for (double sigma : cfg.sigmas) {
            for (double lam : cfg.lambdas) {
              for (const auto& shots : cfg.shots) {
                const u64 this_cell = cell++;
                if (!usable) continue;
                NoiseConfig noise;
                noise.epsilon = eps;
                noise.sigma0 = sigma;
                noise.lambda_uniform = lam;
                noise.kernel = cfg.kernel;
                noise.shots = shots;
                const double sector_sigma = cfg.sector_sigma.value_or(sigma);
                if (cfg.sector_policy == SectorPolicy::kAllShifts &&
                    (eps > 0.0 || numtheory::mersenne_exponent(n))) {
                  noise.sectors = spectrum::all_shift_sectors(*instance, sector_sigma);
                }
                spectrum::validate(noise, *instance);
                for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
                  const u64 seed = derive_seed(cfg.seed, this_cell, rep);
                  NoiseConfig with_seed = noise;
                  with_seed.seed = seed;
                  jobs.push_back({InstanceDescriptor{n, u64{1} << s, t}, *instance, std::move(with_seed), seed});
                }
              }
            }
          }
        }
      }
    }
  }
  if (jobs.empty()) throw DomainError("sweep: the effective grid is empty");

  std::vector<RunRecord> records(jobs.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const Job& job = jobs[i];
      const Spectrum mixed = spectrum::noisy_mixture(job.instance, job.noise);
      StoredSpectrum stored = job.noise.shots
                                  ? StoredSpectrum(spectrum::sample_counts(mixed, *job.noise.shots, job.seed))
                                  : StoredSpectrum(mixed);
      records[i] = make_record(job.desc, job.noise, job.seed, std::move(stored));
    } catch (...) {
#pragma omp critical(ofrec_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

// ---------------------------------------------------------------------------
// Import

namespace {

bool valid_meta_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  }
  return true;
}

}  // namespace

RunRecord import_histogram_text(const std::string& text, const InstanceDescriptor& desc,
                                std::map<std::string, std::string> metadata) {
  const auto instance = desc.resolve();
  const u64 q = instance.register_size();
  Counts counts{desc.precision, 0, std::vector<u64>(q, 0)};
  std::map<std::string, std::string> meta;
  bool seen_row = false;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(std::string_view(line).substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        const std::string k = trim(std::string_view(body).substr(0, eq));
        if (valid_meta_key(k)) meta[k] = trim(std::string_view(body).substr(eq + 1));
      }
      continue;
    }
    const auto fields = split_list(line);
    std::optional<u64> y, c;
    if (fields.size() == 2 && line.find(',') != std::string::npos) {
      y = parse_number<u64>(fields[0]);
      c = parse_number<u64>(fields[1]);
    }
    if (!y || !c) {
      if (!seen_row && fields.size() == 2 && !parse_number<u64>(fields[0]) && !parse_number<u64>(fields[1])) {
        seen_row = true;  // header
        continue;
      }
      throw FormatError("malformed row '" + line + "' at line " + std::to_string(lineno), lineno);
    }
    seen_row = true;
    if (*y >= q) {
      throw FormatError("outcome " + std::to_string(*y) + " ≥ Q=" + std::to_string(q) + " at line " +
                            std::to_string(lineno),
                        lineno);
    }
    counts.counts[*y] += *c;
    counts.shots += *c;
  }
  if (counts.shots == 0) throw FormatError("histogram has zero total counts", lines.size());
  for (auto& [k, v] : metadata) meta[k] = v;
  return make_record(desc, std::nullopt, 0, std::move(counts), std::move(meta));
}

RunRecord import_histogram(const std::string& path, const InstanceDescriptor& desc,
                           std::map<std::string, std::string> metadata) {
  const std::string text = io::read_file(path);
  try {
    return import_histogram_text(text, desc, std::move(metadata));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what(), e.line());
  }
}

std::vector<RunRecord> import_histograms(
    const std::vector<std::pair<std::string, InstanceDescriptor>>& inputs) {
  std::vector<RunRecord> out;
  for (const auto& [path, desc] : inputs) out.push_back(import_histogram(path, desc));
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

json record_to_json(const RunRecord& r) {
  json j;
  j["instance"] = {{"N", r.instance.modulus}, {"a", r.instance.base}, {"t", r.instance.precision}};
  j["noise"] = r.noise ? io::to_json(*r.noise) : json(nullptr);
  j["shots"] = r.shots ? json(*r.shots) : json(nullptr);
  j["seed"] = r.seed;
  j["spectrum"] = std::visit([](const auto& s) { return io::to_json(s); }, r.spectrum);
  j["decode"] = io::to_json(r.decode);
  j["features"] = io::to_json(r.features);
  j["r_true"] = r.r_true;
  j["recoverable"] = r.recoverable;
  j["metadata"] = r.metadata;
  return j;
}

RunRecord record_from_json(const json& j) {
  try {
    RunRecord r;
    const auto& inst = j.at("instance");
    r.instance = {inst.at("N").get<u64>(), inst.at("a").get<u64>(), inst.at("t").get<unsigned>()};
    if (!j.at("noise").is_null()) r.noise = io::noise_config_from_json(j.at("noise"));
    if (!j.at("shots").is_null()) r.shots = j.at("shots").get<u64>();
    r.seed = j.at("seed").get<u64>();
    auto doc = io::spectrum_from_json(j.at("spectrum"));
    if (doc.counts) {
      r.spectrum = std::move(*doc.counts);
    } else {
      r.spectrum = std::move(doc.spectrum);
    }
    r.decode = io::decode_result_from_json(j.at("decode"));
    r.features = io::feature_vector_from_json(j.at("features"));
    r.r_true = j.at("r_true").get<u64>();
    r.recoverable = j.at("recoverable").get<bool>();
    r.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    if (r.recoverable != decoder::is_recoverable(r.decode, r.r_true)) {
      throw FormatError("recoverable flag disagrees with r_calc and r_true", 0);
    }
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad record: ") + e.what(), 0);
  }
}

std::string serialize_dataset(const std::vector<RunRecord>& records) {
  std::string out = json{{"schema", kSchemaName}, {"version", kSchemaVersion}}.dump();
  out += '\n';
  for (const auto& r : records) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<RunRecord> parse_dataset(const std::string& text) {
  std::vector<RunRecord> out;
  const auto lines = split_lines(text);
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (trim(lines[i]).empty()) continue;
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      throw FormatError("line " + std::to_string(lineno) + ": invalid JSON (" + e.what() + ")", lineno);
    }
    if (!have_header) {
      if (!j.is_object() || !j.contains("schema") || j.value("schema", "") != kSchemaName) {
        throw FormatError("line " + std::to_string(lineno) + ": missing '" + kSchemaName + "' schema header", lineno);
      }
      const int found = j.value("version", -1);
      if (found != kSchemaVersion) {
        throw FormatError("schema version mismatch: expected " + std::to_string(kSchemaVersion) + ", found " +
                              std::to_string(found),
                          lineno);
      }
      have_header = true;
      continue;
    }
    try {
      out.push_back(record_from_json(j));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what(), lineno);
    } catch (const DomainError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what(), lineno);
    }
  }
  return out;
}

void save_dataset(const std::vector<RunRecord>& records, const std::string& path) {
  io::write_file(path, serialize_dataset(records));
}

std::vector<RunRecord> load_dataset(const std::string& path) {
  const std::string text = io::read_file(path);
  try {
    return parse_dataset(text);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what(), e.line());
  }
}

// ---------------------------------------------------------------------------
// Summaries

Summary summarize(const std::vector<RunRecord>& records) {
  if (records.empty()) throw DomainError("cannot summarize an empty dataset");
  Summary s;
  for (const auto& r : records) {
    ++s.total;
    (r.recoverable ? s.recoverable : s.non_recoverable)++;
    auto bump = [&](GroupCount& g) {
      ++g.total;
      if (r.recoverable) ++g.recoverable;
    };
    bump(s.by_modulus[r.instance.modulus]);
    bump(s.by_base[r.instance.base]);
    bump(s.by_precision[r.instance.precision]);
    for (const auto& [k, v] : r.metadata) bump(s.by_metadata[k][v]);
  }
  return s;
}

std::string format_percent(std::size_t part, std::size_t whole) {
  char buf[32];
  const double pct = whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
  std::snprintf(buf, sizeof buf, "%.1f%%", pct);
  return buf;
}

std::string format_count(std::size_t part, std::size_t whole) {
  return std::to_string(part) + " (" + format_percent(part, whole) + ")";
}

std::string headline(const Summary& s) {
  return std::to_string(s.total) + " total, " + format_count(s.recoverable, s.total) + ", " +
         format_count(s.non_recoverable, s.total);
}

namespace {

template <typename Key>
std::string group_line(const std::map<Key, GroupCount>& groups) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, g] : groups) {
    os << (first ? "" : ", ") << k << " (" << g.total << " runs, " << format_count(g.recoverable, g.total)
       << " recoverable)";
    first = false;
  }
  return os.str();
}

template <typename Key>
json group_json(const std::map<Key, GroupCount>& groups) {
  json out = json::object();
  for (const auto& [k, g] : groups) {
    std::ostringstream key;
    key << k;
    out[key.str()] = {{"total", g.total}, {"recoverable", g.recoverable}};
  }
  return out;
}

}  // namespace

std::string render_summary(const Summary& s) {
  std::ostringstream os;
  os << headline(s) << "\n\n";
  auto row = [&](const std::string& k, const std::string& v) {
    os << k << std::string(k.size() < 22 ? 22 - k.size() : 1, ' ') << v << "\n";
  };
  row("Statistic", "Value");
  row("Total runs", std::to_string(s.total));
  row("Recoverable runs", format_count(s.recoverable, s.total));
  row("Non-recoverable runs", format_count(s.non_recoverable, s.total));
  row("Instances N", group_line(s.by_modulus));
  row("Bases a", group_line(s.by_base));
  row("Precision size t", group_line(s.by_precision));
  for (const auto& [key, groups] : s.by_metadata) row(key, group_line(groups));
  return os.str();
}

json summary_to_json(const Summary& s) {
  json meta = json::object();
  for (const auto& [key, groups] : s.by_metadata) meta[key] = group_json(groups);
  return {{"total", s.total},
          {"recoverable", s.recoverable},
          {"non_recoverable", s.non_recoverable},
          {"recoverable_pct", format_percent(s.recoverable, s.total)},
          {"by_N", group_json(s.by_modulus)},
          {"by_a", group_json(s.by_base)},
          {"by_t", group_json(s.by_precision)},
          {"by_metadata", meta}};
}

ml::Samples to_samples(const std::vector<RunRecord>& records) {
  ml::Samples s{ml::FeatureMatrix(0, features::kFeatureCount), {}};
  for (const auto& r : records) {
    const auto row = r.features.as_array();
    s.x.push_row(row);
    s.y.push_back(r.recoverable ? 1 : 0);
  }
  return s;
}

}  // namespace ofrec::dataset
