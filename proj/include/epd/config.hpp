// Copyright 2026 The EPD Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "epd/entropy_field.hpp"
#include "epd/sampler.hpp"
#include "epd/spiral.hpp"
#include "epd/verification.hpp"

namespace epd {

enum class OracleKind { kMask, kRemote };

std::string_view to_string(OracleKind kind);

struct OracleConfig {
  OracleKind kind = OracleKind::kMask;
  double noise = 0.0;      // mask oracle label-flip probability
  std::string endpoint;    // remote oracle base URL
  double timeout_s = 10.0;
  int max_in_flight = 4;
  int top_k = 5;
  std::optional<MarkerShape> marker_shape = MarkerShape::kStar;  // nullopt: random
  std::optional<int> marker_size_px = 16;                        // nullopt: random
};

// Every algorithm parameter of a run. File form: one JSON object with keys
// spiral, sampler, entropy, policy, oracle, alpha; omitted keys keep their
// defaults and unknown keys are rejected.
struct RunConfig {
  SpiralConfig spiral;
  bool random_direction = true;
  bool random_terminal = true;
  SamplerConfig sampler;
  EntropyParams entropy;
  EarlyStopPolicy policy;
  OracleConfig oracle;
  double alpha = 1000.0;

  void validate() const;
};

nlohmann::json run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

// Sorted-key serialization hashed into the digest.
std::string canonical_config_text(const RunConfig& config);

// Lowercase hex SHA-256 of canonical_config_text.
std::string config_digest(const RunConfig& config);

std::string sha256_hex(std::string_view data);

}  // namespace epd
