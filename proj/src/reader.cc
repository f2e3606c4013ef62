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

#include "bgqa/reader.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "bgqa/error.h"
#include "httplib.h"
#include "jsonl.h"

namespace bgqa {

using nlohmann::json;

OptionDistribution SoftmaxNormalize(const OptionScores& s) {
  if (s.raw.empty()) throw UsageError("cannot normalize an empty score vector");
  double max = -std::numeric_limits<double>::infinity();
  for (double x : s.raw) {
    if (!std::isfinite(x)) throw UsageError("option scores must be finite");
    max = std::max(max, x);
  }
  OptionDistribution d;
  d.probs.resize(s.raw.size());
  double sum = 0;
  for (size_t j = 0; j < s.raw.size(); ++j) {
    d.probs[j] = std::exp(s.raw[j] - max);
    sum += d.probs[j];
  }
  for (double& p : d.probs) p /= sum;
  return d;
}

std::string QuestionWithOption(std::string_view question, std::string_view option) {
  std::string out;
  out.reserve(question.size() + 1 + option.size());
  out.append(question);
  out.push_back(' ');
  out.append(option);
  return out;
}

std::vector<OptionScores> OptionScorer::ScoreMany(
    std::span<const Passage* const> passages, std::string_view question,
    std::span<const std::string> options) const {
  std::vector<OptionScores> out;
  out.reserve(passages.size());
  for (const Passage* p : passages) out.push_back(Score(*p, question, options));
  return out;
}

// ---------------------------------------------------------------------------
// Lexical baseline

LexicalScorer::LexicalScorer(const Index* index)
    : LexicalScorer(index, index ? index->analyzer() : Analyzer::Bulgarian()) {}

LexicalScorer::LexicalScorer(const Index* index, Analyzer analyzer)
    : index_(index), analyzer_(std::move(analyzer)) {
  if (index_) idf_field_ = index_->field("passage.bg");
}

double LexicalScorer::TermWeight(std::string_view term) const {
  if (!idf_field_) return 1.0;
  return idf_field_->Bm25Idf(idf_field_->df(term));
}

OptionScores LexicalScorer::Score(const Passage& p, std::string_view question,
                                  std::span<const std::string> options) const {
  TermList passage_terms = analyzer_.Analyze(p.text, AnalyzerKind::kBg);
  std::set<std::string, std::less<>> in_passage(passage_terms.begin(), passage_terms.end());
  OptionScores s;
  s.raw.reserve(options.size());
  for (const auto& option : options) {
    TermList q = analyzer_.Analyze(QuestionWithOption(question, option), AnalyzerKind::kBg);
    std::set<std::string> unique(q.begin(), q.end());
    double score = 0;
    for (const auto& term : unique) {
      if (in_passage.count(term)) score += TermWeight(term);
    }
    s.raw.push_back(score);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Scorer handles and the remote client

ScorerHandle ScorerHandle::Parse(std::string_view spec) {
  ScorerHandle h;
  if (spec == "lexical") return h;
  constexpr std::string_view kPrefix = "remote=";
  if (spec.substr(0, kPrefix.size()) == kPrefix && spec.size() > kPrefix.size()) {
    h.kind = Kind::kRemote;
    h.endpoint = std::string(spec.substr(kPrefix.size()));
    return h;
  }
  throw UsageError("scorer must be 'lexical' or 'remote=URL', got '" + std::string(spec) + "'");
}

std::string ScorerHandle::ToString() const {
  return kind == Kind::kLexical ? "lexical" : "remote=" + endpoint;
}

RemoteScorer::RemoteScorer(ScorerHandle handle) : handle_(std::move(handle)) {
  if (handle_.kind != ScorerHandle::Kind::kRemote) {
    throw UsageError("RemoteScorer needs a remote scorer handle");
  }
  std::string_view url = handle_.endpoint;
  constexpr std::string_view kHttp = "http://";
  if (url.substr(0, kHttp.size()) != kHttp) {
    throw UsageError("remote scorer endpoint must be an http:// URL: " + handle_.endpoint);
  }
  size_t slash = url.find('/', kHttp.size());
  if (slash == std::string_view::npos) {
    scheme_host_port_ = std::string(url);
  } else {
    scheme_host_port_ = std::string(url.substr(0, slash));
    base_path_ = std::string(url.substr(slash));
    while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
  }
  if (scheme_host_port_.size() == kHttp.size()) {
    throw UsageError("remote scorer endpoint has no host: " + handle_.endpoint);
  }
}

std::string RemoteScorer::Post(const std::string& path, const std::string& body) const {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(handle_.timeout_seconds, 0);
  client.set_read_timeout(handle_.timeout_seconds, 0);
  client.set_write_timeout(handle_.timeout_seconds, 0);
  std::string full = base_path_ + path;
  auto res = client.Post(full, body, "application/json; charset=utf-8");
  if (!res) {
    throw TransportError("POST " + handle_.endpoint + path + " failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("POST " + handle_.endpoint + path + " returned HTTP " +
                         std::to_string(res->status) + ": " + res->body.substr(0, 200));
  }
  return res->body;
}

std::string EncodeScoreRequest(std::string_view passage, std::string_view question,
                               std::span<const std::string> options) {
  json j{{"passage", passage},
         {"question", question},
         {"options", std::vector<std::string>(options.begin(), options.end())}};
  return io::Dump(j);
}

namespace {

OptionScores ScoresFromJson(const json& j, size_t expected_options) {
  if (!j.is_object() || !j.contains("logits") || !j["logits"].is_array()) {
    throw MalformedResponseError("scorer response lacks a 'logits' array");
  }
  OptionScores s;
  for (const auto& v : j["logits"]) {
    if (!v.is_number()) throw MalformedResponseError("non-numeric logit in scorer response");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw MalformedResponseError("non-finite logit in scorer response");
    s.raw.push_back(x);
  }
  if (s.raw.size() != expected_options) {
    throw LengthMismatchError(expected_options, s.raw.size());
  }
  return s;
}

json ParseBody(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw MalformedResponseError(std::string("scorer response is not JSON: ") + e.what());
  }
}

}  // namespace

OptionScores DecodeScoreResponse(std::string_view body, size_t expected_options) {
  return ScoresFromJson(ParseBody(body), expected_options);
}

OptionScores RemoteScorer::Score(const Passage& p, std::string_view question,
                                 std::span<const std::string> options) const {
  return DecodeScoreResponse(Post("/score", EncodeScoreRequest(p.text, question, options)),
                             options.size());
}

std::vector<OptionScores> RemoteScorer::ScoreMany(
    std::span<const Passage* const> passages, std::string_view question,
    std::span<const std::string> options) const {
  if (passages.empty()) return {};
  json batch = json::array();
  for (const Passage* p : passages) {
    batch.push_back(json{{"passage", p->text},
                         {"question", question},
                         {"options", std::vector<std::string>(options.begin(), options.end())}});
  }
  json body = ParseBody(Post("/score_batch", io::Dump(batch)));
  if (!body.is_array()) throw MalformedResponseError("batch response is not an array");
  if (body.size() != passages.size()) {
    throw MalformedResponseError("batch response has " + std::to_string(body.size()) +
                                 " entries for " + std::to_string(passages.size()) + " requests");
  }
  std::vector<OptionScores> out;
  out.reserve(body.size());
  for (const auto& item : body) out.push_back(ScoresFromJson(item, options.size()));
  return out;
}

std::unique_ptr<OptionScorer> MakeScorer(const ScorerHandle& h, const Index* index) {
  if (h.kind == ScorerHandle::Kind::kRemote) return std::make_unique<RemoteScorer>(h);
  return std::make_unique<LexicalScorer>(index);
}

}  // namespace bgqa
