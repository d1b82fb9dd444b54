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

#include <stdexcept>
#include <string>
#include <string_view>

namespace epd {

enum class ErrorKind {
  kInvalidGeometry,
  kInvalidParameter,
  kOutOfRegion,
  kInsufficientData,
  kInsufficientSamples,
  kInsufficientEvidence,
  kProtocol,
  kOracleUnavailable,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// Every domain failure in the library is an epd::Error. The pipeline tags
// errors with the stage that raised them (geometry, spiral, sampler, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string stage = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

  void set_stage(std::string stage);

 private:
  ErrorKind kind_;
  std::string stage_;
};

}  // namespace epd
