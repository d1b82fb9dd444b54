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

#include <memory>
#include <semaphore>
#include <string>

#include "epd/verification.hpp"

namespace epd {

inline constexpr const char* kVqaUrlEnv = "EPD_VQA_URL";
inline constexpr const char* kVqaPath = "/v1/point-vqa";

struct RemoteVqaConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8080 (optionally with a path prefix)
  double timeout_s = 10.0;
  int max_in_flight = 4;
};

// EPD_VQA_URL when set and non-empty, otherwise `configured`.
std::string resolve_vqa_endpoint(const std::string& configured);

// Request body:
// {"image_uri", "expression", "point": [x, y],
//  "marker": {"shape", "color", "size_px"}, "prompt_template", "top_k"}
std::string build_vqa_request(const OracleQuery& query);

// Parses {"tokens": [{"text", "prob"}, ...]} and aggregates it into a
// verdict. Throws kProtocol on any schema violation.
Verdict parse_vqa_response(const std::string& body, int top_k);

// One POST to {endpoint}/v1/point-vqa, retried once; timeouts, transport and
// HTTP errors and malformed bodies surface as kOracleUnavailable.
Verdict remote_vqa_query(const OracleQuery& query, const std::string& endpoint,
                         double timeout_s);

// Oracle over the remote endpoint. Copies share one in-flight limit, so a
// single client can be handed to concurrent pipeline runs.
class RemoteVqaOracle final : public Oracle {
 public:
  explicit RemoteVqaOracle(RemoteVqaConfig config);
  Verdict query(const OracleQuery& query) override;

  const std::string& endpoint() const { return config_.endpoint; }

 private:
  RemoteVqaConfig config_;
  std::shared_ptr<std::counting_semaphore<>> in_flight_;
};

}  // namespace epd
