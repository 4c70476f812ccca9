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

#include "ofrec/serialize.hpp"

#include <fstream>
#include <sstream>

#include "ofrec/errors.hpp"

namespace ofrec::io {

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field '") + key + "'", 0);
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("field '") + key + "' has the wrong type", 0);
  }
}

}  // namespace

json to_json(const spectrum::Spectrum& spec) {
  return {{"t", spec.precision()}, {"probs", std::vector<double>(spec.probs().begin(), spec.probs().end())}};
}

json to_json(const spectrum::Counts& counts) {
  return {{"t", counts.precision}, {"shots", counts.shots}, {"counts", counts.counts}};
}

json to_json(const decoder::DecodeResult& result) {
  json masses = json::object();
  for (const auto& [r0, m] : result.mass_map.entries) masses[std::to_string(r0)] = m;
  json j = {{"M_ver", result.m_ver}, {"M1", result.m1}, {"M2", result.m2}, {"masses", masses}};
  j["r_calc"] = result.r_calc ? json(*result.r_calc) : json(nullptr);
  return j;
}

json to_json(const features::FeatureVector& fv) {
  return {{"a_peak", fv.a_peak}, {"h_norm", fv.h_norm}, {"m1_frac", fv.m1_frac}, {"margin_frac", fv.margin_frac}};
}

json to_json(const spectrum::NoiseConfig& cfg) {
  json sectors = json::array();
  for (const auto& s : cfg.sectors) sectors.push_back({{"h", s.h}, {"nu", s.nu}, {"sigma", s.sigma}});
  json j = {{"epsilon", cfg.epsilon},
            {"sectors", sectors},
            {"sigma0", cfg.sigma0},
            {"lambda", cfg.lambda_uniform},
            {"kernel", spectrum::to_string(cfg.kernel)},
            {"seed", cfg.seed}};
  j["shots"] = cfg.shots ? json(*cfg.shots) : json(nullptr);
  return j;
}

SpectrumDocument spectrum_from_json(const json& j) {
  const auto t = field<unsigned>(j, "t");
  if (j.contains("counts")) {
    spectrum::Counts c{t, field<std::uint64_t>(j, "shots"), field<std::vector<std::uint64_t>>(j, "counts")};
    auto spec = c.to_spectrum();
    return {std::move(spec), std::move(c)};
  }
  if (j.contains("probs")) {
    return {spectrum::Spectrum::from_probs(t, field<std::vector<double>>(j, "probs")), std::nullopt};
  }
  throw FormatError("spectrum needs either 'probs' or 'counts'", 0);
}

decoder::DecodeResult decode_result_from_json(const json& j) {
  decoder::DecodeResult r;
  if (!j.contains("r_calc")) throw FormatError("missing field 'r_calc'", 0);
  if (!j.at("r_calc").is_null()) r.r_calc = field<std::uint64_t>(j, "r_calc");
  r.m_ver = field<double>(j, "M_ver");
  r.m1 = field<double>(j, "M1");
  r.m2 = field<double>(j, "M2");
  const auto masses = field<std::map<std::string, double>>(j, "masses");
  for (const auto& [key, m] : masses) {
    try {
      std::size_t pos = 0;
      const auto r0 = std::stoull(key, &pos);
      if (pos != key.size()) throw std::invalid_argument(key);
      r.mass_map.entries[r0] = m;
    } catch (const std::exception&) {
      throw FormatError("mass key '" + key + "' is not an integer", 0);
    }
  }
  r.mass_map.total_verified = r.m_ver;
  return r;
}

features::FeatureVector feature_vector_from_json(const json& j) {
  return {field<double>(j, "a_peak"), field<double>(j, "h_norm"), field<double>(j, "m1_frac"),
          field<double>(j, "margin_frac")};
}

spectrum::NoiseConfig noise_config_from_json(const json& j) {
  spectrum::NoiseConfig cfg;
  cfg.epsilon = field<double>(j, "epsilon");
  cfg.sigma0 = field<double>(j, "sigma0");
  cfg.lambda_uniform = field<double>(j, "lambda");
  cfg.kernel = spectrum::kernel_family_from_string(field<std::string>(j, "kernel"));
  cfg.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("shots") && !j.at("shots").is_null()) cfg.shots = field<std::uint64_t>(j, "shots");
  for (const auto& s : field<json>(j, "sectors")) {
    cfg.sectors.push_back({field<unsigned>(s, "h"), field<double>(s, "nu"), field<double>(s, "sigma")});
  }
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("error writing '" + path + "'");
}

SpectrumDocument read_spectrum_file(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what(), 0);
  }
  return spectrum_from_json(j);
}

}  // namespace ofrec::io
