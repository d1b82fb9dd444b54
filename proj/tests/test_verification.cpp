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

#include <set>

#include "epd/error.hpp"
#include "epd/rng.hpp"
#include "epd/verification.hpp"
#include "test_support.hpp"

namespace epd {
namespace {

// Replies from a fixed list of (label, confidence) pairs, in call order.
class ScriptedOracle final : public Oracle {
 public:
  explicit ScriptedOracle(std::vector<std::pair<Label, double>> script)
      : script_(std::move(script)) {}

  Verdict query(const OracleQuery& q) override {
    queries.push_back(q);
    const auto [label, conf] = script_.at(calls_++ % script_.size());
    Verdict v;
    v.label = label;
    v.confidence = conf;
    v.p_yes = label == Label::kPositive ? conf : 1 - conf;
    v.p_no = 1 - v.p_yes;
    return v;
  }

  std::vector<OracleQuery> queries;

 private:
  std::vector<std::pair<Label, double>> script_;
  std::size_t calls_ = 0;
};

constexpr Label kPos = Label::kPositive;
constexpr Label kNeg = Label::kNegative;

CandidateSet grid_candidates(int k) {
  CandidateSet set;
  for (int i = 0; i < k; ++i) {
    set.external.push_back({{10.0 + i, 10}, 0.5, 0.6 - 0.01 * i, Origin::kExternal, i});
    set.internal.push_back({{50.0 + i, 50}, 0.5, 0.5 - 0.01 * i, Origin::kInternal, k + i});
  }
  return set;
}

TEST(Aggregate, MixedCaseAndWhitespaceTokens) {
  const std::vector<TokenProb> tokens{{"Yes", 0.5}, {" yes", 0.2}, {"No", 0.1}, {"maybe", 0.1}};
  const YesNoMass m = aggregate_token_probabilities(tokens);
  EXPECT_NEAR(m.p_yes, 0.7, 1e-15);
  EXPECT_NEAR(m.p_no, 0.1, 1e-15);
  const Verdict v = verdict_from_tokens(tokens);
  EXPECT_EQ(v.label, kPos);
  EXPECT_NEAR(v.confidence, 0.7, 1e-15);
}

TEST(Aggregate, NoYesNoMassAndTies) {
  const Verdict none = verdict_from_tokens({{"sure", 0.9}});
  EXPECT_EQ(none.label, kNeg);
  EXPECT_EQ(none.confidence, 0.0);
  const Verdict tie = verdict_from_tokens({{"yes", 0.4}, {"no", 0.4}});
  EXPECT_EQ(tie.label, kNeg);
  EXPECT_EQ(tie.confidence, 0.4);
  const Verdict substring = verdict_from_tokens({{"yesterday", 0.8}, {"no", 0.1}});
  EXPECT_EQ(substring.label, kNeg);
}

TEST(Aggregate, ProtocolViolations) {
  const auto kind = [](std::vector<TokenProb> t) {
    try {
      aggregate_token_probabilities(t);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;
  };
  EXPECT_EQ(kind({{"yes", 1.2}}), ErrorKind::kProtocol);
  EXPECT_EQ(kind({{"yes", -0.1}}), ErrorKind::kProtocol);
  EXPECT_EQ(kind({{"yes", 0.7}, {"no", 0.5}}), ErrorKind::kProtocol);
  EXPECT_NO_THROW(aggregate_token_probabilities(std::vector<TokenProb>{{"yes", 0.6}, {"no", 0.4000005}}));
}

TEST(Prompt, RendersPlaceholders) {
  OracleQuery q;
  q.expression = "the dog on the left";
  q.marker = {MarkerShape::kHexagon, "blue", 12};
  EXPECT_EQ(render_prompt(q),
            "Answer strictly yes or no: Is the blue-colored hexagon on the object referred to "
            "by 'the dog on the left' in the picture?");
}

TEST(MaskOracle, NoiselessFollowsMask) {
  const Scene scene = testing::ellipse_scene(100, 100, 50, 50, 30, 20, "m");
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    OracleQuery q;
    q.point = {rng.uniform(0, 100), rng.uniform(0, 100)};
    const Verdict v = mask_oracle(q, scene, 0.0, rng);
    ASSERT_EQ(v.label == kPos, scene.contains(q.point));
    ASSERT_GE(v.confidence, 0.8);
    ASSERT_LE(v.confidence, 1.0);
    ASSERT_NEAR(v.p_yes + v.p_no, 1.0, 1e-12);
  }
}

TEST(MaskOracle, FullNoiseInverts) {
  const Scene scene = testing::ellipse_scene(100, 100, 50, 50, 30, 20, "m");
  MaskOracle oracle(scene, 1.0, 5);
  OracleQuery q;
  q.point = {50, 50};
  EXPECT_EQ(oracle.query(q).label, kNeg);
  q.point = {1, 1};
  EXPECT_EQ(oracle.query(q).label, kPos);
  EXPECT_THROW(MaskOracle(scene, 1.5, 1), Error);
}

TEST(QuerySequence, AlternatesByEntropyRank) {
  CandidateSet set;
  set.external = {{{0, 0}, 0.5, 0.2, Origin::kExternal, 0}, {{1, 0}, 0.5, 0.6, Origin::kExternal, 1}};
  set.internal = {{{2, 0}, 0.5, 0.1, Origin::kInternal, 2}, {{3, 0}, 0.5, 0.3, Origin::kInternal, 3},
                  {{4, 0}, 0.5, 0.05, Origin::kInternal, 4}};
  std::vector<int> got;
  for (const auto& sp : query_sequence(set, QueryOrder::kAlternate)) got.push_back(sp.sequence_index);
  EXPECT_EQ(got, (std::vector<int>{1, 3, 0, 2, 4}));
  got.clear();
  for (const auto& sp : query_sequence(set, QueryOrder::kInternalFirst)) got.push_back(sp.sequence_index);
  EXPECT_EQ(got, (std::vector<int>{3, 2, 4, 1, 0}));
}

TEST(VerificationLoop, HaltsOnceTargetsAreMet) {
  ScriptedOracle oracle({{kPos, 0.9}, {kNeg, 0.7}, {kPos, 0.8}, {kPos, 0.99}});
  Rng rng(1);
  const VerificationResult r =
      run_verification_loop(grid_candidates(4), oracle, EarlyStopPolicy{}, QueryContext{}, rng);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(oracle.queries.size(), 3u);
  EXPECT_EQ(r.positives.size(), 2u);
  EXPECT_EQ(r.negatives.size(), 1u);
}

TEST(VerificationLoop, LowConfidenceEverywhereIsInsufficientEvidence) {
  ScriptedOracle oracle({{kPos, 0.6}, {kNeg, 0.55}});
  Rng rng(1);
  try {
    run_verification_loop(grid_candidates(4), oracle, EarlyStopPolicy{}, QueryContext{}, rng);
    FAIL();
  } catch (const InsufficientEvidenceError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInsufficientEvidence);
    EXPECT_EQ(e.partial().trace.size(), 8u);
    EXPECT_TRUE(e.partial().positives.empty());
    EXPECT_FALSE(e.partial().complete);
  }
}

TEST(VerificationLoop, SingleTargetsStopAtThirdQuery) {
  ScriptedOracle oracle({{kPos, 0.9}, {kPos, 0.9}, {kNeg, 0.9}});
  EarlyStopPolicy policy;
  policy.pos_target = 1;
  policy.neg_target = 1;
  Rng rng(2);
  const VerificationResult r =
      run_verification_loop(grid_candidates(4), oracle, policy, QueryContext{}, rng);
  EXPECT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(r.positives.size(), 2u);
  EXPECT_EQ(r.negatives.size(), 1u);
}

TEST(VerificationLoop, QueryIndicesAndContextPropagate) {
  ScriptedOracle oracle({{kPos, 0.9}, {kNeg, 0.9}});
  QueryContext ctx;
  ctx.image_uri = "img://x";
  ctx.expression = "the cat";
  ctx.top_k = 7;
  Rng rng(3);
  const auto r = run_verification_loop(grid_candidates(4), oracle, EarlyStopPolicy{}, ctx, rng);
  for (std::size_t i = 0; i < r.trace.size(); ++i) EXPECT_EQ(r.trace[i].query_index, int(i));
  for (const auto& q : oracle.queries) {
    EXPECT_EQ(q.image_uri, "img://x");
    EXPECT_EQ(q.expression, "the cat");
    EXPECT_EQ(q.top_k, 7);
    EXPECT_EQ(q.marker.shape, MarkerShape::kStar);
    EXPECT_EQ(q.marker.size_px, 16);
  }
}

TEST(VerificationLoop, RetainedCountMonotoneInEta) {
  const Scene scene = testing::ellipse_scene(200, 200, 100, 100, 60, 40, "e");
  CandidateSet set;
  Rng pts(9);
  for (int i = 0; i < 16; ++i) {
    set.external.push_back({{pts.uniform(0, 200), pts.uniform(0, 200)}, 0.5, pts.uniform01(), Origin::kExternal, i});
    set.internal.push_back({{pts.uniform(0, 200), pts.uniform(0, 200)}, 0.5, pts.uniform01(), Origin::kInternal, 16 + i});
  }
  MaskOracle oracle(scene, 0.2, 4);
  EarlyStopPolicy policy;
  policy.max_queries = 32;
  Rng rng(4);
  const auto trace = sweep_candidates(set, oracle, policy, QueryContext{}, rng);
  ASSERT_EQ(trace.size(), 32u);
  std::size_t prev = trace.size() + 1;
  for (double eta = 0.0; eta <= 1.0; eta += 0.05) {
    std::size_t retained = 0;
    for (const auto& e : trace) retained += is_retained(e.verdict, eta);
    ASSERT_LE(retained, prev);
    prev = retained;
  }
  std::size_t at_one = 0;
  for (const auto& e : trace) at_one += is_retained(e.verdict, 1.0);
  EXPECT_EQ(at_one, 0u);
}

TEST(VerificationLoop, EarlyStopIsAPrefixOfTheSweep) {
  const Scene scene = testing::ellipse_scene(200, 200, 100, 100, 60, 40, "e");
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng pts(seed);
    CandidateSet set;
    for (int i = 0; i < 4; ++i) {
      set.external.push_back({{pts.uniform(0, 200), pts.uniform(0, 200)}, 0.5, pts.uniform01(), Origin::kExternal, i});
      set.internal.push_back({{pts.uniform(60, 140), pts.uniform(80, 120)}, 0.5, pts.uniform01(), Origin::kInternal, 4 + i});
    }
    const EarlyStopPolicy policy;
    MaskOracle o1(scene, 0.1, seed), o2(scene, 0.1, seed);
    Rng r1(seed + 100), r2(seed + 100);
    const auto sweep = sweep_candidates(set, o1, policy, QueryContext{}, r1);
    const VerificationResult replay = replay_early_stop(sweep, policy);
    try {
      const VerificationResult live = run_verification_loop(set, o2, policy, QueryContext{}, r2);
      ASSERT_TRUE(replay.complete);
      ASSERT_EQ(live.trace.size(), replay.trace.size());
      for (std::size_t i = 0; i < live.trace.size(); ++i) {
        ASSERT_EQ(live.trace[i].candidate.point, sweep[i].candidate.point);
        ASSERT_EQ(live.trace[i].verdict.confidence, sweep[i].verdict.confidence);
        ASSERT_EQ(live.trace[i].marker.color, sweep[i].marker.color);
      }
    } catch (const InsufficientEvidenceError&) {
      ASSERT_FALSE(replay.complete);
    }
  }
}

TEST(Markers, PaletteColorsDistinctWithinEachBlockOfEight) {
  ScriptedOracle oracle({{kNeg, 0.1}});
  EarlyStopPolicy policy;
  policy.max_queries = 16;
  Rng rng(11);
  const auto trace = sweep_candidates(grid_candidates(8), oracle, policy, QueryContext{}, rng);
  ASSERT_EQ(trace.size(), 16u);
  for (int block = 0; block < 2; ++block) {
    std::set<std::string> colors;
    for (int i = 0; i < 8; ++i) colors.insert(trace[block * 8 + i].marker.color);
    EXPECT_EQ(colors.size(), 8u);
  }
}

TEST(Markers, RandomShapeAndSizeStayInRange) {
  ScriptedOracle oracle({{kNeg, 0.1}});
  QueryContext ctx;
  ctx.marker_shape.reset();
  ctx.marker_size_px.reset();
  EarlyStopPolicy policy;
  policy.max_queries = 16;
  Rng rng(12);
  const auto trace = sweep_candidates(grid_candidates(8), oracle, policy, ctx, rng);
  for (const auto& e : trace) EXPECT_NO_THROW(e.marker.validate());
}

TEST(Policy, Validation) {
  EarlyStopPolicy p;
  p.eta = 1.2;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.pos_target = 0;
  p.neg_target = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.max_queries = 0;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_EQ(query_order_from_string("external_first"), QueryOrder::kExternalFirst);
  EXPECT_EQ(marker_shape_from_string("circle"), MarkerShape::kCircle);
}

}  // namespace
}  // namespace epd
