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

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include <json.hpp>

#include "epd/error.hpp"
#include "epd/remote_vqa.hpp"
#include "test_support.hpp"

namespace epd {
namespace {

using testing::StubVqaServer;

OracleQuery sample_query() {
  OracleQuery q;
  q.image_uri = "file:///data/img1.jpg";
  q.expression = "the red mug";
  q.point = {12.5, 40};
  q.marker = {MarkerShape::kCircle, "green", 10};
  q.top_k = 5;
  return q;
}

StubVqaServer::Handler reply(std::string body, int status = 200) {
  return [body, status](const StubVqaServer::Request&, int& st, std::string& out) {
    st = status;
    out = body;
  };
}

ErrorKind kind_of_query(const std::string& url) {
  try {
    remote_vqa_query(sample_query(), url, 2.0);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kIo;
}

class EnvGuard {
 public:
  EnvGuard() {
    if (const char* v = std::getenv(kVqaUrlEnv)) saved_ = v;
    unsetenv(kVqaUrlEnv);
  }
  ~EnvGuard() {
    if (saved_.empty()) {
      unsetenv(kVqaUrlEnv);
    } else {
      setenv(kVqaUrlEnv, saved_.c_str(), 1);
    }
  }

 private:
  std::string saved_;
};

TEST(RemoteVqa, MixedCaseTokensGivePositive) {
  EnvGuard env;
  StubVqaServer server(reply(R"({"tokens":[{"text":"Yes","prob":0.6},{"text":" yes","prob":0.21},)"
                             R"({"text":"NO","prob":0.1}]})"));
  const Verdict v = remote_vqa_query(sample_query(), server.url(), 2.0);
  EXPECT_EQ(v.label, Label::kPositive);
  EXPECT_NEAR(v.confidence, 0.81, 1e-12);
  EXPECT_NEAR(v.p_no, 0.1, 1e-12);
  EXPECT_EQ(v.raw_tokens.size(), 3u);
  EXPECT_EQ(server.request_count(), 1);
}

TEST(RemoteVqa, TieIsNegative) {
  EnvGuard env;
  StubVqaServer server(reply(R"({"tokens":[{"text":"yes","prob":0.45},{"text":"no","prob":0.45}]})"));
  const Verdict v = remote_vqa_query(sample_query(), server.url(), 2.0);
  EXPECT_EQ(v.label, Label::kNegative);
  EXPECT_EQ(v.confidence, 0.45);
}

TEST(RemoteVqa, RequestBodyAndPath) {
  EnvGuard env;
  StubVqaServer server(reply(R"({"tokens":[{"text":"no","prob":0.9}]})"));
  remote_vqa_query(sample_query(), server.url() + "/prefix/", 2.0);
  const auto reqs = server.requests();
  ASSERT_EQ(reqs.size(), 1u);
  EXPECT_EQ(reqs[0].path, "/prefix/v1/point-vqa");
  const auto j = nlohmann::json::parse(reqs[0].body);
  EXPECT_EQ(j["image_uri"], "file:///data/img1.jpg");
  EXPECT_EQ(j["expression"], "the red mug");
  EXPECT_EQ(j["point"][0], 12.5);
  EXPECT_EQ(j["point"][1], 40.0);
  EXPECT_EQ(j["marker"]["shape"], "circle");
  EXPECT_EQ(j["marker"]["color"], "green");
  EXPECT_EQ(j["marker"]["size_px"], 10);
  EXPECT_EQ(j["top_k"], 5);
  const std::string tmpl = j["prompt_template"];
  EXPECT_NE(tmpl.find("{color}"), std::string::npos);
  EXPECT_NE(tmpl.find("{T}"), std::string::npos);
}

TEST(RemoteVqa, NonJsonBodyRetriedOnceThenUnavailable) {
  EnvGuard env;
  StubVqaServer server(reply("<html>oops</html>"));
  EXPECT_EQ(kind_of_query(server.url()), ErrorKind::kOracleUnavailable);
  EXPECT_EQ(server.request_count(), 2);
}

TEST(RemoteVqa, ServerErrorRetriedOnceThenUnavailable) {
  EnvGuard env;
  StubVqaServer server(reply("{}", 500));
  EXPECT_EQ(kind_of_query(server.url()), ErrorKind::kOracleUnavailable);
  EXPECT_EQ(server.request_count(), 2);
}

TEST(RemoteVqa, TransientFailureRecoversOnRetry) {
  EnvGuard env;
  std::atomic<int> calls{0};
  StubVqaServer server([&calls](const StubVqaServer::Request&, int& st, std::string& out) {
    st = calls++ == 0 ? 503 : 200;
    out = R"({"tokens":[{"text":"yes","prob":0.9}]})";
  });
  EXPECT_EQ(remote_vqa_query(sample_query(), server.url(), 2.0).label, Label::kPositive);
  EXPECT_EQ(server.request_count(), 2);
}

TEST(RemoteVqa, MoreTokensThanTopKIsRejected) {
  EnvGuard env;
  StubVqaServer server(reply(R"({"tokens":[{"text":"a","prob":0.1},{"text":"b","prob":0.1},)"
                             R"({"text":"c","prob":0.1},{"text":"d","prob":0.1},)"
                             R"({"text":"e","prob":0.1},{"text":"f","prob":0.1}]})"));
  EXPECT_EQ(kind_of_query(server.url()), ErrorKind::kOracleUnavailable);
  try {
    parse_vqa_response(R"({"tokens":[{"text":"a","prob":0.1},{"text":"b","prob":0.1}]})", 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kProtocol);
  }
}

TEST(RemoteVqa, SchemaViolationsAreProtocolErrors) {
  for (const char* body : {R"({"tok":[]})", R"({"tokens":[{"text":1,"prob":0.2}]})",
                           R"({"tokens":[{"text":"yes","prob":1.4}]})", "[]"}) {
    try {
      parse_vqa_response(body, 5);
      ADD_FAILURE() << body;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kProtocol) << body;
    }
  }
}

TEST(RemoteVqa, UnreachableEndpointIsUnavailable) {
  EnvGuard env;
  std::string url;
  {
    StubVqaServer server(reply("{}"));
    url = server.url();
  }
  EXPECT_EQ(kind_of_query(url), ErrorKind::kOracleUnavailable);
}

TEST(RemoteVqa, EnvironmentOverridesConfiguredEndpoint) {
  EnvGuard env;
  StubVqaServer server(reply(R"({"tokens":[{"text":"yes","prob":0.95}]})"));
  setenv(kVqaUrlEnv, server.url().c_str(), 1);
  EXPECT_EQ(resolve_vqa_endpoint("http://192.0.2.1:9"), server.url());
  RemoteVqaOracle oracle({"http://192.0.2.1:9", 2.0, 2});
  EXPECT_EQ(oracle.endpoint(), server.url());
  EXPECT_EQ(oracle.query(sample_query()).label, Label::kPositive);
  EXPECT_EQ(server.request_count(), 1);
  unsetenv(kVqaUrlEnv);
  EXPECT_EQ(resolve_vqa_endpoint("http://a:1"), "http://a:1");
}

TEST(RemoteVqa, ConcurrentQueriesThroughOneClient) {
  EnvGuard env;
  StubVqaServer server(reply(R"({"tokens":[{"text":"no","prob":0.8}]})"));
  RemoteVqaOracle oracle({server.url(), 2.0, 2});
  std::vector<std::thread> workers;
  std::atomic<int> negatives{0};
  for (int i = 0; i < 6; ++i) {
    workers.emplace_back([&] {
      if (oracle.query(sample_query()).label == Label::kNegative) ++negatives;
    });
  }
  for (auto& t : workers) t.join();
  EXPECT_EQ(negatives.load(), 6);
  EXPECT_EQ(server.request_count(), 6);
}

TEST(RemoteVqa, ConfigurationErrors) {
  EnvGuard env;
  EXPECT_THROW(RemoteVqaOracle({"", 2.0, 1}), Error);
  EXPECT_THROW(RemoteVqaOracle({"ftp://host", 2.0, 1}), Error);
  EXPECT_THROW(RemoteVqaOracle({"http://host", 0.0, 1}), Error);
}

}  // namespace
}  // namespace epd
