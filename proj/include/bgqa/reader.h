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

#ifndef BGQA_READER_H_
#define BGQA_READER_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgqa/chunker.h"
#include "bgqa/index.h"

namespace bgqa {

// Unnormalized per-option scores for one passage.
struct OptionScores {
  std::vector<double> raw;
};

// Probability of each option given one passage.
struct OptionDistribution {
  std::vector<double> probs;
};

// exp(raw_j - max) / sum_k exp(raw_k - max). Throws UsageError on an empty
// or non-finite input.
OptionDistribution SoftmaxNormalize(const OptionScores& s);

// The text a reader scores for option j: question + " " + option.
std::string QuestionWithOption(std::string_view question, std::string_view option);

class OptionScorer {
 public:
  virtual ~OptionScorer() = default;

  // Returns exactly options.size() finite scores.
  virtual OptionScores Score(const Passage& p, std::string_view question,
                             std::span<const std::string> options) const = 0;

  // Scores many passages for the same question. The default calls Score
  // for each passage in turn.
  virtual std::vector<OptionScores> ScoreMany(
      std::span<const Passage* const> passages, std::string_view question,
      std::span<const std::string> options) const;
};

// IDF-weighted term overlap: raw_j is the sum, over the distinct bg-analyzed
// terms of (question + " " + option_j) that also occur in the bg-analyzed
// passage text, of that term's BM25 IDF in the index's passage.bg field.
// Without an index, or when the index lacks passage.bg, each shared term
// weighs 1.
class LexicalScorer final : public OptionScorer {
 public:
  explicit LexicalScorer(const Index* index = nullptr);
  LexicalScorer(const Index* index, Analyzer analyzer);

  OptionScores Score(const Passage& p, std::string_view question,
                     std::span<const std::string> options) const override;

  double TermWeight(std::string_view term) const;

 private:
  const Index* index_;
  const FieldIndex* idf_field_ = nullptr;
  Analyzer analyzer_;
};

struct ScorerHandle {
  enum class Kind { kLexical, kRemote };

  Kind kind = Kind::kLexical;
  std::string endpoint;  // base URL for kRemote, e.g. http://127.0.0.1:8080
  int timeout_seconds = 60;
  size_t max_concurrency = 4;

  // "lexical" or "remote=URL". Throws UsageError.
  static ScorerHandle Parse(std::string_view spec);
  std::string ToString() const;
};

// Client for the remote scorer service.
//   POST <endpoint>/score        {passage, question, options} -> {logits}
//   POST <endpoint>/score_batch  [request...]                  -> [response...]
// Raises TransportError when the service cannot be reached or answers with a
// non-2xx status, MalformedResponseError for unusable bodies and
// LengthMismatchError when |logits| != |options|.
class RemoteScorer final : public OptionScorer {
 public:
  explicit RemoteScorer(ScorerHandle handle);

  OptionScores Score(const Passage& p, std::string_view question,
                     std::span<const std::string> options) const override;

  // One /score_batch round trip.
  std::vector<OptionScores> ScoreMany(
      std::span<const Passage* const> passages, std::string_view question,
      std::span<const std::string> options) const override;

  const ScorerHandle& handle() const { return handle_; }

 private:
  std::string Post(const std::string& path, const std::string& body) const;

  ScorerHandle handle_;
  std::string scheme_host_port_;
  std::string base_path_;
};

// The wire format, exposed for servers and tests.
std::string EncodeScoreRequest(std::string_view passage, std::string_view question,
                               std::span<const std::string> options);
// Throws MalformedResponseError / LengthMismatchError.
OptionScores DecodeScoreResponse(std::string_view body, size_t expected_options);

// Builds the scorer a handle describes. `index` feeds IDF weights to the
// lexical scorer and may be null.
std::unique_ptr<OptionScorer> MakeScorer(const ScorerHandle& h, const Index* index);

}  // namespace bgqa

#endif  // BGQA_READER_H_
