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

#include "epd/verification.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

namespace epd {

namespace {

std::string normalize_token(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  std::string out(text.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

// Draws markers so colors stay distinct until the palette is exhausted, then
// starts a fresh permutation.
class MarkerDrawer {
 public:
  MarkerDrawer(const QueryContext& context, Rng& rng) : context_(context), rng_(rng) {}

  MarkerSpec next() {
    if (used_ % kMarkerPalette.size() == 0) reshuffle();
    MarkerSpec m;
    m.color = std::string(kMarkerPalette[order_[used_ % kMarkerPalette.size()]]);
    ++used_;
    m.shape = context_.marker_shape ? *context_.marker_shape
                                    : static_cast<MarkerShape>(rng_.uniform_index(3));
    m.size_px = context_.marker_size_px
                    ? *context_.marker_size_px
                    : kMinMarkerSize + static_cast<int>(rng_.uniform_index(
                                           kMaxMarkerSize - kMinMarkerSize + 1));
    return m;
  }

 private:
  void reshuffle() {
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    for (std::size_t i = order_.size() - 1; i > 0; --i) {
      std::swap(order_[i], order_[rng_.uniform_index(i + 1)]);
    }
  }

  const QueryContext& context_;
  Rng& rng_;
  std::array<std::size_t, kMarkerPalette.size()> order_{};
  std::size_t used_ = 0;
};

std::vector<TraceEntry> drive(const CandidateSet& candidates, Oracle& oracle,
                              const EarlyStopPolicy& policy, const QueryContext& context,
                              Rng& rng, bool stop_early, bool* complete) {
  policy.validate();
  if (context.top_k < 1) {
    throw Error(ErrorKind::kInvalidParameter, "top_k must be >= 1", "verification");
  }
  const std::vector<ScoredPoint> sequence = query_sequence(candidates, policy.order);
  if (sequence.empty()) {
    throw Error(ErrorKind::kInsufficientData, "no candidates to verify", "verification");
  }
  const std::size_t limit =
      std::min(sequence.size(), static_cast<std::size_t>(policy.max_queries));
  MarkerDrawer markers(context, rng);
  std::vector<TraceEntry> trace;
  int positives = 0;
  int negatives = 0;
  *complete = false;
  for (std::size_t i = 0; i < limit; ++i) {
    OracleQuery q{context.image_uri, context.expression, sequence[i].point, markers.next(),
                  context.top_k};
    TraceEntry entry{static_cast<int>(i), sequence[i], q.marker, oracle.query(q), false};
    entry.retained = is_retained(entry.verdict, policy.eta);
    if (entry.retained) {
      (entry.verdict.label == Label::kPositive ? positives : negatives) += 1;
    }
    trace.push_back(std::move(entry));
    if (positives >= policy.pos_target && negatives >= policy.neg_target) {
      *complete = true;
      if (stop_early) break;
    }
  }
  return trace;
}

}  // namespace

std::string_view to_string(MarkerShape shape) {
  switch (shape) {
    case MarkerShape::kStar: return "star";
    case MarkerShape::kCircle: return "circle";
    case MarkerShape::kHexagon: return "hexagon";
  }
  return "star";
}

MarkerShape marker_shape_from_string(std::string_view name) {
  for (MarkerShape s : {MarkerShape::kStar, MarkerShape::kCircle, MarkerShape::kHexagon}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorKind::kInvalidParameter, "unknown marker shape '" + std::string(name) + "'");
}

std::string_view to_string(Label label) {
  return label == Label::kPositive ? "positive" : "negative";
}

std::string_view to_string(QueryOrder order) {
  switch (order) {
    case QueryOrder::kAlternate: return "alternate";
    case QueryOrder::kExternalFirst: return "external_first";
    case QueryOrder::kInternalFirst: return "internal_first";
  }
  return "alternate";
}

QueryOrder query_order_from_string(std::string_view name) {
  for (QueryOrder o :
       {QueryOrder::kAlternate, QueryOrder::kExternalFirst, QueryOrder::kInternalFirst}) {
    if (to_string(o) == name) return o;
  }
  throw Error(ErrorKind::kInvalidParameter, "unknown query order '" + std::string(name) + "'");
}

void MarkerSpec::validate() const {
  if (size_px < kMinMarkerSize || size_px > kMaxMarkerSize) {
    throw Error(ErrorKind::kInvalidParameter, "marker size must lie in [6, 24] px");
  }
  if (std::find(kMarkerPalette.begin(), kMarkerPalette.end(), color) == kMarkerPalette.end()) {
    throw Error(ErrorKind::kInvalidParameter, "marker color '" + color + "' not in palette");
  }
}

void EarlyStopPolicy::validate() const {
  if (pos_target < 0 || neg_target < 0 || (pos_target == 0 && neg_target == 0)) {
    throw Error(ErrorKind::kInvalidParameter,
                "policy targets must be >= 0 and not both zero", "verification");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "eta must lie in [0, 1]", "verification");
  }
  if (max_queries < 1) {
    throw Error(ErrorKind::kInvalidParameter, "max_queries must be >= 1", "verification");
  }
}

std::string render_prompt(const OracleQuery& query) {
  std::string s(kPromptTemplate);
  replace_all(s, "{color}", query.marker.color);
  replace_all(s, "{marker}", to_string(query.marker.shape));
  replace_all(s, "{T}", query.expression);
  return s;
}

YesNoMass aggregate_token_probabilities(std::span<const TokenProb> tokens) {
  YesNoMass mass;
  double total = 0.0;
  for (const TokenProb& t : tokens) {
    if (!std::isfinite(t.prob) || t.prob < 0.0 || t.prob > 1.0) {
      throw Error(ErrorKind::kProtocol, "token probability outside [0, 1]", "verification");
    }
    total += t.prob;
    const std::string norm = normalize_token(t.text);
    if (norm == "yes") mass.p_yes += t.prob;
    if (norm == "no") mass.p_no += t.prob;
  }
  if (total > 1.0 + 1e-6) {
    throw Error(ErrorKind::kProtocol, "token probabilities sum above 1", "verification");
  }
  return mass;
}

Verdict verdict_from_tokens(std::vector<TokenProb> tokens) {
  const YesNoMass mass = aggregate_token_probabilities(tokens);
  Verdict v;
  v.p_yes = mass.p_yes;
  v.p_no = mass.p_no;
  v.label = mass.p_yes > mass.p_no ? Label::kPositive : Label::kNegative;
  v.confidence = std::max(mass.p_yes, mass.p_no);
  v.raw_tokens = std::move(tokens);
  return v;
}

Verdict mask_oracle(const OracleQuery& query, const Scene& scene, double noise, Rng& rng) {
  const bool inside = scene.contains(query.point);
  const bool flip = rng.uniform01() < noise;
  const double u = rng.uniform(0.0, 0.2);
  Verdict v;
  v.label = (inside != flip) ? Label::kPositive : Label::kNegative;
  v.p_yes = v.label == Label::kPositive ? 1.0 - u : u;
  v.p_no = v.label == Label::kPositive ? u : 1.0 - u;
  v.confidence = std::max(v.p_yes, v.p_no);
  v.raw_tokens = {{"yes", v.p_yes}, {"no", v.p_no}};
  if (v.p_no > v.p_yes) std::swap(v.raw_tokens[0], v.raw_tokens[1]);
  return v;
}

MaskOracle::MaskOracle(const Scene& scene, double noise, std::uint64_t seed)
    : scene_(scene), noise_(noise), rng_(seed) {
  if (!(noise >= 0.0 && noise <= 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "oracle noise must lie in [0, 1]");
  }
}

Verdict MaskOracle::query(const OracleQuery& query) {
  return mask_oracle(query, scene_, noise_, rng_);
}

Verdict SerializedOracle::query(const OracleQuery& query) {
  std::lock_guard<std::mutex> lock(mu_);
  return inner_.query(query);
}

InsufficientEvidenceError::InsufficientEvidenceError(VerificationResult partial)
    : Error(ErrorKind::kInsufficientEvidence,
            "query budget exhausted before the positive/negative targets were met",
            "verification"),
      partial_(std::move(partial)) {}

std::vector<ScoredPoint> query_sequence(const CandidateSet& candidates, QueryOrder order) {
  const auto all = [](const std::vector<ScoredPoint>& v) {
    return rank_by_entropy(v, static_cast<int>(std::max<std::size_t>(v.size(), 1)));
  };
  const std::vector<ScoredPoint> ext = all(candidates.external);
  const std::vector<ScoredPoint> in = all(candidates.internal);
  std::vector<ScoredPoint> out;
  out.reserve(ext.size() + in.size());
  switch (order) {
    case QueryOrder::kExternalFirst:
      out.insert(out.end(), ext.begin(), ext.end());
      out.insert(out.end(), in.begin(), in.end());
      break;
    case QueryOrder::kInternalFirst:
      out.insert(out.end(), in.begin(), in.end());
      out.insert(out.end(), ext.begin(), ext.end());
      break;
    case QueryOrder::kAlternate:
      for (std::size_t i = 0; i < std::max(ext.size(), in.size()); ++i) {
        if (i < ext.size()) out.push_back(ext[i]);
        if (i < in.size()) out.push_back(in[i]);
      }
      break;
  }
  return out;
}

VerificationResult replay_early_stop(std::span<const TraceEntry> trace,
                                     const EarlyStopPolicy& policy) {
  policy.validate();
  VerificationResult result;
  const std::size_t limit = std::min(trace.size(), static_cast<std::size_t>(policy.max_queries));
  for (std::size_t i = 0; i < limit; ++i) {
    TraceEntry e = trace[i];
    e.retained = is_retained(e.verdict, policy.eta);
    if (e.retained) {
      (e.verdict.label == Label::kPositive ? result.positives : result.negatives)
          .push_back(e.candidate);
    }
    result.trace.push_back(std::move(e));
    if (static_cast<int>(result.positives.size()) >= policy.pos_target &&
        static_cast<int>(result.negatives.size()) >= policy.neg_target) {
      result.complete = true;
      break;
    }
  }
  return result;
}

VerificationResult run_verification_loop(const CandidateSet& candidates, Oracle& oracle,
                                         const EarlyStopPolicy& policy,
                                         const QueryContext& context, Rng& rng) {
  bool complete = false;
  const std::vector<TraceEntry> trace =
      drive(candidates, oracle, policy, context, rng, true, &complete);
  VerificationResult result = replay_early_stop(trace, policy);
  if (!result.complete) throw InsufficientEvidenceError(std::move(result));
  return result;
}

std::vector<TraceEntry> sweep_candidates(const CandidateSet& candidates, Oracle& oracle,
                                         const EarlyStopPolicy& policy,
                                         const QueryContext& context, Rng& rng) {
  bool complete = false;
  return drive(candidates, oracle, policy, context, rng, false, &complete);
}

}  // namespace epd
