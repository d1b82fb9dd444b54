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

#include <array>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epd/entropy_field.hpp"
#include "epd/error.hpp"
#include "epd/rng.hpp"
#include "epd/sampler.hpp"
#include "epd/scene.hpp"

namespace epd {

enum class MarkerShape { kStar, kCircle, kHexagon };

std::string_view to_string(MarkerShape shape);
MarkerShape marker_shape_from_string(std::string_view name);

inline constexpr std::array<std::string_view, 8> kMarkerPalette{
    "red", "green", "blue", "yellow", "purple", "orange", "cyan", "magenta"};
inline constexpr int kMinMarkerSize = 6;
inline constexpr int kMaxMarkerSize = 24;

// Sent verbatim; the serving side substitutes the placeholders after drawing
// the marker.
inline constexpr std::string_view kPromptTemplate =
    "Answer strictly yes or no: Is the {color}-colored {marker} on the object "
    "referred to by '{T}' in the picture?";

struct MarkerSpec {
  MarkerShape shape = MarkerShape::kStar;
  std::string color = "red";
  int size_px = 16;

  void validate() const;
};

struct OracleQuery {
  std::string image_uri;
  std::string expression;
  Point2 point;
  MarkerSpec marker;
  int top_k = 5;
};

// Template with {color}, {marker} and {T} filled in from the query.
std::string render_prompt(const OracleQuery& query);

enum class Label { kPositive, kNegative };

std::string_view to_string(Label label);

struct TokenProb {
  std::string text;
  double prob = 0.0;
};

struct Verdict {
  Label label = Label::kNegative;
  double confidence = 0.0;  // max(p_yes, p_no)
  double p_yes = 0.0;
  double p_no = 0.0;
  std::vector<TokenProb> raw_tokens;
};

struct YesNoMass {
  double p_yes = 0.0;
  double p_no = 0.0;
};

// Sums token probabilities whose trimmed, lowercased text is exactly "yes"
// or "no". Throws kProtocol for probabilities outside [0, 1] or a total
// above 1 + 1e-6.
YesNoMass aggregate_token_probabilities(std::span<const TokenProb> tokens);

// Aggregates tokens and labels by argmax; p_yes == p_no is negative.
Verdict verdict_from_tokens(std::vector<TokenProb> tokens);

class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Verdict query(const OracleQuery& query) = 0;
};

// Ground-truth stand-in for the vision-language model: mask containment at
// the queried pixel, flipped with probability `noise`, reported with a
// synthetic confidence 1 - u, u ~ U[0, 0.2].
Verdict mask_oracle(const OracleQuery& query, const Scene& scene, double noise, Rng& rng);

class MaskOracle final : public Oracle {
 public:
  MaskOracle(const Scene& scene, double noise, std::uint64_t seed);
  Verdict query(const OracleQuery& query) override;

 private:
  const Scene& scene_;
  double noise_;
  Rng rng_;
};

// Makes any oracle safe to share between threads by serializing queries.
class SerializedOracle final : public Oracle {
 public:
  explicit SerializedOracle(Oracle& inner) : inner_(inner) {}
  Verdict query(const OracleQuery& query) override;

 private:
  Oracle& inner_;
  std::mutex mu_;
};

enum class QueryOrder { kAlternate, kExternalFirst, kInternalFirst };

std::string_view to_string(QueryOrder order);
QueryOrder query_order_from_string(std::string_view name);

struct EarlyStopPolicy {
  int pos_target = 2;
  int neg_target = 1;
  double eta = 0.6;
  int max_queries = 8;  // 2 * budget_k by default
  QueryOrder order = QueryOrder::kAlternate;

  void validate() const;
};

// Per-run query context shared by every marker query.
struct QueryContext {
  std::string image_uri;
  std::string expression;
  int top_k = 5;
  std::optional<MarkerShape> marker_shape = MarkerShape::kStar;  // nullopt: random
  std::optional<int> marker_size_px = 16;                        // nullopt: random
};

struct TraceEntry {
  int query_index = 0;
  ScoredPoint candidate;
  MarkerSpec marker;
  Verdict verdict;
  bool retained = false;
};

struct VerificationResult {
  std::vector<TraceEntry> trace;
  std::vector<ScoredPoint> positives;  // retained, in query order
  std::vector<ScoredPoint> negatives;
  bool complete = false;  // targets met
};

class InsufficientEvidenceError : public Error {
 public:
  explicit InsufficientEvidenceError(VerificationResult partial);
  const VerificationResult& partial() const noexcept { return partial_; }

 private:
  VerificationResult partial_;
};

inline bool is_retained(const Verdict& v, double eta) { return v.confidence > eta; }

// Candidates in query order: each set ranked by entropy, then merged
// according to `order` (alternate starts with the external set).
std::vector<ScoredPoint> query_sequence(const CandidateSet& candidates, QueryOrder order);

// Queries candidates until the retained positives and negatives reach the
// policy targets. Throws InsufficientEvidenceError (with the partial result)
// when max_queries or the candidates run out first.
VerificationResult run_verification_loop(const CandidateSet& candidates, Oracle& oracle,
                                         const EarlyStopPolicy& policy,
                                         const QueryContext& context, Rng& rng);

// Queries every candidate (up to max_queries) with no early stop. Marker and
// oracle draws match run_verification_loop, so its trace is a prefix of this
// one for the same seeds.
std::vector<TraceEntry> sweep_candidates(const CandidateSet& candidates, Oracle& oracle,
                                         const EarlyStopPolicy& policy,
                                         const QueryContext& context, Rng& rng);

// Replays the early-stopping rule over a recorded trace with the policy's
// eta (retention is recomputed, not read from the trace).
VerificationResult replay_early_stop(std::span<const TraceEntry> trace,
                                     const EarlyStopPolicy& policy);

}  // namespace epd
