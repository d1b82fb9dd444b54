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

#include "epd/error.hpp"

#include <utility>

namespace epd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidGeometry: return "invalid-geometry";
    case ErrorKind::kInvalidParameter: return "invalid-parameter";
    case ErrorKind::kOutOfRegion: return "out-of-region";
    case ErrorKind::kInsufficientData: return "insufficient-data";
    case ErrorKind::kInsufficientSamples: return "insufficient-samples";
    case ErrorKind::kInsufficientEvidence: return "insufficient-evidence";
    case ErrorKind::kProtocol: return "protocol";
    case ErrorKind::kOracleUnavailable: return "oracle-unavailable";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::string stage)
    : std::runtime_error(message), kind_(kind), stage_(std::move(stage)) {}

void Error::set_stage(std::string stage) { stage_ = std::move(stage); }

}  // namespace epd
