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

#include "epd/remote_vqa.hpp"

#include <cmath>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace epd {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

ParsedUrl split_url(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0) {
    throw Error(ErrorKind::kInvalidParameter,
                "VQA endpoint must be an http:// URL, got '" + url + "'", "verification");
  }
  const std::size_t path = url.find('/', scheme + 3);
  ParsedUrl out{url.substr(0, path), path == std::string::npos ? "" : url.substr(path)};
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

[[noreturn]] void protocol(const std::string& what) {
  throw Error(ErrorKind::kProtocol, "VQA response: " + what, "verification");
}

class SemaphoreGuard {
 public:
  explicit SemaphoreGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SemaphoreGuard() { s_.release(); }
  SemaphoreGuard(const SemaphoreGuard&) = delete;
  SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

}  // namespace

std::string resolve_vqa_endpoint(const std::string& configured) {
  const char* env = std::getenv(kVqaUrlEnv);
  if (env != nullptr && *env != '\0') return env;
  return configured;
}

std::string build_vqa_request(const OracleQuery& query) {
  nlohmann::ordered_json body;
  body["image_uri"] = query.image_uri;
  body["expression"] = query.expression;
  body["point"] = {query.point.x, query.point.y};
  body["marker"] = {{"shape", to_string(query.marker.shape)},
                    {"color", query.marker.color},
                    {"size_px", query.marker.size_px}};
  body["prompt_template"] = kPromptTemplate;
  body["top_k"] = query.top_k;
  return body.dump();
}

Verdict parse_vqa_response(const std::string& body, int top_k) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    protocol("body is not JSON");
  }
  if (!j.is_object() || !j.contains("tokens") || !j["tokens"].is_array()) {
    protocol("missing 'tokens' array");
  }
  const auto& arr = j["tokens"];
  if (static_cast<int>(arr.size()) > top_k) protocol("more tokens than top_k");
  std::vector<TokenProb> tokens;
  for (const auto& t : arr) {
    if (!t.is_object() || !t.contains("text") || !t["text"].is_string() ||
        !t.contains("prob") || !t["prob"].is_number()) {
      protocol("token entries need string 'text' and numeric 'prob'");
    }
    tokens.push_back({t["text"].get<std::string>(), t["prob"].get<double>()});
  }
  return verdict_from_tokens(std::move(tokens));
}

Verdict remote_vqa_query(const OracleQuery& query, const std::string& endpoint,
                         double timeout_s) {
  const ParsedUrl url = split_url(endpoint);
  const std::string body = build_vqa_request(query);
  const std::string path = url.prefix + kVqaPath;
  const auto secs = static_cast<time_t>(std::floor(timeout_s));
  const auto usecs = static_cast<time_t>((timeout_s - std::floor(timeout_s)) * 1e6);

  std::string last_error;
  for (int attempt = 0; attempt < 2; ++attempt) {
    httplib::Client client(url.origin);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    auto res = client.Post(path, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP status " + std::to_string(res->status);
      continue;
    }
    try {
      return parse_vqa_response(res->body, query.top_k);
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  throw Error(ErrorKind::kOracleUnavailable,
              "VQA endpoint " + endpoint + " failed twice: " + last_error, "verification");
}

RemoteVqaOracle::RemoteVqaOracle(RemoteVqaConfig config)
    : config_(std::move(config)),
      in_flight_(std::make_shared<std::counting_semaphore<>>(
          std::max(1, config_.max_in_flight))) {
  config_.endpoint = resolve_vqa_endpoint(config_.endpoint);
  if (config_.endpoint.empty()) {
    throw Error(ErrorKind::kInvalidParameter,
                "no VQA endpoint configured (set oracle.endpoint or EPD_VQA_URL)",
                "verification");
  }
  split_url(config_.endpoint);
  if (!(config_.timeout_s > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "timeout must be positive", "verification");
  }
}

Verdict RemoteVqaOracle::query(const OracleQuery& query) {
  SemaphoreGuard guard(*in_flight_);
  return remote_vqa_query(query, config_.endpoint, config_.timeout_s);
}

}  // namespace epd
