// Copyright 2026 The bgqa Authors
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

#ifndef BGQA_PIPELINE_H_
#define BGQA_PIPELINE_H_

#include <optional>
#include <string>
#include <vector>

#include "bgqa/dataset.h"
#include "bgqa/index.h"
#include "bgqa/reader.h"

namespace bgqa {

struct RetrievalConfig {
  std::vector<FieldBoost> fields;
  size_t per_option_top_n = 2;
  Similarity similarity = Similarity::kBm25;

  // title.bg^2, passage.ngram, passage, passage.bg^2 with two hits per option.
  static RetrievalConfig Best();

  // Throws UsageError.
  void Validate() const;
};

// One query per option: question text + " " + option.
std::vector<Query> BuildOptionQueries(const Question& q, const RetrievalConfig& cfg);

struct OptionHit {
  int option = 0;
  size_t rank = 0;  // 1-based position in that option's result list
  double score = 0;

  bool operator==(const OptionHit&) const = default;
};

struct Evidence {
  Passage passage;
  std::vector<OptionHit> hits;  // every option query that returned it
};

// Deduplicated union of the per-option hit lists, in first-seen order when
// walking options in order and each list by rank.
struct EvidenceSet {
  std::vector<Evidence> passages;

  size_t size() const { return passages.size(); }
  bool empty() const { return passages.empty(); }
};

// Throws UsageError when cfg names a field the index was not built with.
EvidenceSet RetrieveEvidence(const Index& index, const Question& q,
                             const RetrievalConfig& cfg);

struct PassageTrace {
  std::string passage_id;
  std::vector<int> options_hit;
  OptionDistribution dist;
};

struct Prediction {
  int chosen = 0;
  bool tie = false;
  std::vector<double> vote;
  std::vector<PassageTrace> trace;  // evidence order
};

// Vote values are compared at this many decimals when flagging ties.
inline constexpr int kTieDecimals = 2;

// Sums per-passage distributions and picks the answer. The sum runs in
// ascending passage_id order and does not depend on evidence order.
// chosen is the lowest index attaining the maximum vote; tie is set when the
// maximum, rounded to kTieDecimals, is shared by two or more options. Empty
// evidence yields a uniform vote and tie = true.
Prediction Vote(size_t num_options, std::vector<PassageTrace> trace);

struct AnswerOptions {
  // Passages scored concurrently (remote scorers); 1 means sequential.
  size_t max_concurrency = 1;
};

// Scores every evidence passage and votes. A scorer failure fails the whole
// question; the error message names the passage.
Prediction Answer(const Question& q, const EvidenceSet& evidence,
                  const OptionScorer& scorer, const AnswerOptions& opts = {});

enum class Marker { kCorrect, kIncorrect, kTie };

std::string_view ToString(Marker m);
// Empty when the gold answer is unknown.
std::optional<Marker> MarkerFor(const Prediction& p, std::optional<int> gold);

struct TraceReport {
  std::string text;   // human-readable table
  std::string jsonl;  // one machine-readable record, newline terminated
};

// Renders the per-passage distributions, per-option provenance, vote,
// chosen answer and, when gold is known, the correctness marker.
TraceReport Explain(const Question& q, const EvidenceSet& evidence,
                    const Prediction& p, std::optional<int> gold);

// Convenience: score the evidence with `scorer` and render.
TraceReport Explain(const Question& q, const EvidenceSet& evidence,
                    const OptionScorer& scorer, std::optional<int> gold);

}  // namespace bgqa

#endif  // BGQA_PIPELINE_H_
