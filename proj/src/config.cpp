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

#include "epd/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "epd/error.hpp"

namespace epd {

using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& what) {
  throw Error(ErrorKind::kInvalidParameter, "config: " + what, "config");
}

// Typed, strict view over one config section.
class Section {
 public:
  Section(const json& j, std::string name, std::initializer_list<const char*> keys)
      : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) bad_config("'" + name_ + "' must be an object");
    for (const auto& [k, v] : j_.items()) {
      bool known = false;
      for (const char* allowed : keys) known = known || k == allowed;
      if (!known) bad_config("unknown key '" + name_ + "." + k + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  bool is_string(const char* key) const { return has(key) && j_.at(key).is_string(); }

  void read(const char* key, double& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) bad_config(path(key) + " must be a number");
    out = v.get<double>();
  }

  void read(const char* key, int& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) bad_config(path(key) + " must be an integer");
    out = v.get<int>();
  }

  void read(const char* key, std::uint64_t& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      bad_config(path(key) + " must be a non-negative integer");
    }
    out = v.get<std::uint64_t>();
  }

  std::string string(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_string()) bad_config(path(key) + " must be a string");
    return v.get<std::string>();
  }

  template <typename Parse>
  auto parse(const char* key, Parse parse_fn) const {
    try {
      return parse_fn(string(key));
    } catch (const Error& e) {
      bad_config(path(key) + ": " + e.what());
    }
  }

 private:
  std::string path(const char* key) const { return "'" + name_ + "." + key + "'"; }

  const json& j_;
  std::string name_;
};

}  // namespace

std::string_view to_string(OracleKind kind) {
  return kind == OracleKind::kRemote ? "remote" : "mask";
}

void RunConfig::validate() const {
  try {
    spiral.validate();
    sampler.validate();
    entropy.validate();
    policy.validate();
  } catch (const Error& e) {
    bad_config(e.what());
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) bad_config("alpha must be positive");
  if (!(oracle.noise >= 0.0 && oracle.noise <= 1.0)) bad_config("oracle.noise must lie in [0, 1]");
  if (oracle.top_k < 1) bad_config("oracle.top_k must be >= 1");
  if (!(oracle.timeout_s > 0.0)) bad_config("oracle.timeout_s must be positive");
  if (oracle.max_in_flight < 1) bad_config("oracle.max_in_flight must be >= 1");
  if (oracle.marker_size_px &&
      (*oracle.marker_size_px < kMinMarkerSize || *oracle.marker_size_px > kMaxMarkerSize)) {
    bad_config("oracle.marker_size_px must lie in [6, 24]");
  }
}

json run_config_to_json(const RunConfig& c) {
  json j;
  j["spiral"] = {
      {"n_turns", c.spiral.n_turns},
      {"n_points", c.spiral.n_points},
      {"exponent_n", c.spiral.exponent_n},
      {"k_sigmoid", c.spiral.k_sigmoid},
      {"t0", c.spiral.t0},
      {"direction", c.random_direction ? "random" : to_string(c.spiral.orientation.direction)},
      {"terminal", c.random_terminal ? "random" : to_string(c.spiral.orientation.terminal)},
  };
  j["sampler"] = {
      {"k_min", c.sampler.k_min},
      {"k_max", c.sampler.k_max},
      {"epsilon", c.sampler.epsilon},
      {"budget_k", c.sampler.budget_k},
      {"density_mapping", to_string(c.sampler.density_mapping)},
      {"seed", c.sampler.seed},
      {"strategy", to_string(c.sampler.strategy)},
  };
  j["entropy"] = {
      {"a", c.entropy.a},
      {"b", c.entropy.b},
      {"c", c.entropy.c},
      {"log_base", to_string(c.entropy.log_base)},
  };
  j["policy"] = {
      {"pos_target", c.policy.pos_target},
      {"neg_target", c.policy.neg_target},
      {"eta", c.policy.eta},
      {"max_queries", c.policy.max_queries},
      {"order", to_string(c.policy.order)},
  };
  j["oracle"] = {
      {"kind", to_string(c.oracle.kind)},
      {"noise", c.oracle.noise},
      {"endpoint", c.oracle.endpoint},
      {"timeout_s", c.oracle.timeout_s},
      {"max_in_flight", c.oracle.max_in_flight},
      {"top_k", c.oracle.top_k},
  };
  j["oracle"]["marker_shape"] =
      c.oracle.marker_shape ? json(to_string(*c.oracle.marker_shape)) : json("random");
  j["oracle"]["marker_size_px"] =
      c.oracle.marker_size_px ? json(*c.oracle.marker_size_px) : json("random");
  j["alpha"] = c.alpha;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  Section top(j, "config", {"spiral", "sampler", "entropy", "policy", "oracle", "alpha"});
  top.read("alpha", c.alpha);

  if (j.contains("spiral")) {
    Section s(j["spiral"], "spiral",
              {"n_turns", "n_points", "exponent_n", "k_sigmoid", "t0", "direction", "terminal"});
    s.read("n_turns", c.spiral.n_turns);
    s.read("n_points", c.spiral.n_points);
    s.read("exponent_n", c.spiral.exponent_n);
    s.read("k_sigmoid", c.spiral.k_sigmoid);
    s.read("t0", c.spiral.t0);
    if (s.has("direction")) {
      c.random_direction = s.string("direction") == "random";
      if (!c.random_direction) {
        c.spiral.orientation.direction = s.parse("direction", direction_from_string);
      }
    }
    if (s.has("terminal")) {
      c.random_terminal = s.string("terminal") == "random";
      if (!c.random_terminal) {
        c.spiral.orientation.terminal = s.parse("terminal", terminal_from_string);
      }
    }
  }

  if (j.contains("sampler")) {
    Section s(j["sampler"], "sampler",
              {"k_min", "k_max", "epsilon", "budget_k", "density_mapping", "seed", "strategy"});
    s.read("k_min", c.sampler.k_min);
    s.read("k_max", c.sampler.k_max);
    s.read("epsilon", c.sampler.epsilon);
    s.read("budget_k", c.sampler.budget_k);
    s.read("seed", c.sampler.seed);
    if (s.has("density_mapping")) {
      c.sampler.density_mapping = s.parse("density_mapping", density_mapping_from_string);
    }
    if (s.has("strategy")) {
      c.sampler.strategy = s.parse("strategy", sampling_strategy_from_string);
    }
  }
  c.policy.max_queries = 2 * c.sampler.budget_k;

  if (j.contains("entropy")) {
    Section s(j["entropy"], "entropy", {"a", "b", "c", "log_base"});
    s.read("a", c.entropy.a);
    s.read("b", c.entropy.b);
    s.read("c", c.entropy.c);
    if (s.has("log_base")) c.entropy.log_base = s.parse("log_base", log_base_from_string);
  }

  if (j.contains("policy")) {
    Section s(j["policy"], "policy", {"pos_target", "neg_target", "eta", "max_queries", "order"});
    s.read("pos_target", c.policy.pos_target);
    s.read("neg_target", c.policy.neg_target);
    s.read("eta", c.policy.eta);
    s.read("max_queries", c.policy.max_queries);
    if (s.has("order")) c.policy.order = s.parse("order", query_order_from_string);
  }

  if (j.contains("oracle")) {
    Section s(j["oracle"], "oracle",
              {"kind", "noise", "endpoint", "timeout_s", "max_in_flight", "top_k",
               "marker_shape", "marker_size_px"});
    if (s.has("kind")) {
      const std::string kind = s.string("kind");
      if (kind == "mask") {
        c.oracle.kind = OracleKind::kMask;
      } else if (kind == "remote") {
        c.oracle.kind = OracleKind::kRemote;
      } else {
        bad_config("'oracle.kind' must be mask or remote");
      }
    }
    s.read("noise", c.oracle.noise);
    if (s.has("endpoint")) c.oracle.endpoint = s.string("endpoint");
    s.read("timeout_s", c.oracle.timeout_s);
    s.read("max_in_flight", c.oracle.max_in_flight);
    s.read("top_k", c.oracle.top_k);
    if (s.has("marker_shape")) {
      if (s.string("marker_shape") == "random") {
        c.oracle.marker_shape.reset();
      } else {
        c.oracle.marker_shape = s.parse("marker_shape", marker_shape_from_string);
      }
    }
    if (s.is_string("marker_size_px")) {
      if (s.string("marker_size_px") != "random") {
        bad_config("'oracle.marker_size_px' must be an integer or \"random\"");
      }
      c.oracle.marker_size_px.reset();
    } else if (s.has("marker_size_px")) {
      int size = 0;
      s.read("marker_size_px", size);
      c.oracle.marker_size_px = size;
    }
  }

  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config file " + path.string(), "config");
  std::ostringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    bad_config(std::string("invalid JSON: ") + e.what());
  }
  return run_config_from_json(j);
}

std::string canonical_config_text(const RunConfig& config) {
  // nlohmann::json keeps object keys sorted, and numbers print as the
  // shortest round-trip decimal, so equal configs give equal text.
  return run_config_to_json(config).dump();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kIo, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string config_digest(const RunConfig& config) {
  return sha256_hex(canonical_config_text(config));
}

}  // namespace epd
