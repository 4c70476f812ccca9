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

// JSON wire formats:
//   Spectrum       {"t": int, "probs": [float]}
//   Counts         {"t": int, "shots": int, "counts": [int]}
//   DecodeResult   {"r_calc": int|null, "M_ver": f, "M1": f, "M2": f, "masses": {"r0": f}}
//   FeatureVector  {"a_peak": f, "h_norm": f, "m1_frac": f, "margin_frac": f}
//   NoiseConfig    {"epsilon", "sectors": [{"h","nu","sigma"}], "sigma0", "lambda",
//                   "kernel", "shots": int|null, "seed"}

#include <optional>
#include <string>

#include "json.hpp"
#include "ofrec/decoder.hpp"
#include "ofrec/features.hpp"
#include "ofrec/spectrum.hpp"

namespace ofrec::io {

using nlohmann::json;

json to_json(const spectrum::Spectrum& spec);
json to_json(const spectrum::Counts& counts);
json to_json(const decoder::DecodeResult& result);
json to_json(const features::FeatureVector& fv);
json to_json(const spectrum::NoiseConfig& cfg);

/// A spectrum document in either variant. `counts` is set for the counts
/// variant, and `spectrum` is then counts / shots.
struct SpectrumDocument {
  spectrum::Spectrum spectrum;
  std::optional<spectrum::Counts> counts;
};

/// Throws FormatError on schema violations and DomainError on invalid values.
SpectrumDocument spectrum_from_json(const json& j);
decoder::DecodeResult decode_result_from_json(const json& j);
features::FeatureVector feature_vector_from_json(const json& j);
spectrum::NoiseConfig noise_config_from_json(const json& j);

/// Whole-file helpers; I/O failures raise IoError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

SpectrumDocument read_spectrum_file(const std::string& path);

}  // namespace ofrec::io
