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

#include "bgqa/pipeline.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "bgqa/error.h"
#include "bgqa/parallel.h"
#include "bgqa/utf8.h"
#include "fmt/format.h"
#include "jsonl.h"

namespace bgqa {

RetrievalConfig RetrievalConfig::Best() {
  RetrievalConfig cfg;
  cfg.fields = ParseFieldBoosts("title.bg^2,passage.ngram,passage,passage.bg^2");
  cfg.per_option_top_n = 2;
  return cfg;
}

void RetrievalConfig::Validate() const {
  if (fields.empty()) throw UsageError("retrieval needs at least one field");
  if (per_option_top_n < 1) throw UsageError("per-option top-n must be at least 1");
}

std::vector<Query> BuildOptionQueries(const Question& q, const RetrievalConfig& cfg) {
  cfg.Validate();
  std::vector<Query> out;
  out.reserve(q.options.size());
  for (const auto& option : q.options) {
    Query query;
    query.text = QuestionWithOption(q.text, option);
    query.fields = cfg.fields;
    query.top_n = cfg.per_option_top_n;
    query.similarity = cfg.similarity;
    out.push_back(std::move(query));
  }
  return out;
}

EvidenceSet RetrieveEvidence(const Index& index, const Question& q,
                             const RetrievalConfig& cfg) {
  for (const auto& fb : cfg.fields) {
    if (!index.field(fb.field)) {
      throw UsageError("retrieval uses field '" + fb.field + "' which the index does not have");
    }
  }
  EvidenceSet set;
  std::unordered_map<uint32_t, size_t> position;
  auto queries = BuildOptionQueries(q, cfg);
  for (size_t j = 0; j < queries.size(); ++j) {
    auto hits = index.Search(queries[j]);
    for (size_t r = 0; r < hits.size(); ++r) {
      OptionHit oh{static_cast<int>(j), r + 1, hits[r].score};
      auto [it, inserted] = position.try_emplace(hits[r].doc, set.passages.size());
      if (inserted) set.passages.push_back(Evidence{index.passage(hits[r].doc), {}});
      set.passages[it->second].hits.push_back(oh);
    }
  }
  return set;
}

Prediction Vote(size_t num_options, std::vector<PassageTrace> trace) {
  if (num_options == 0) throw UsageError("cannot vote over zero options");
  Prediction p;
  p.trace = std::move(trace);
  p.vote.assign(num_options, 0.0);
  if (p.trace.empty()) {
    std::fill(p.vote.begin(), p.vote.end(), 1.0 / static_cast<double>(num_options));
    p.chosen = 0;
    p.tie = true;
    return p;
  }
  std::vector<size_t> order(p.trace.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return p.trace[a].passage_id < p.trace[b].passage_id;
  });
  for (size_t i : order) {
    const auto& probs = p.trace[i].dist.probs;
    if (probs.size() != num_options) {
      throw UsageError("distribution for passage " + p.trace[i].passage_id + " has " +
                       std::to_string(probs.size()) + " entries, expected " +
                       std::to_string(num_options));
    }
    for (size_t j = 0; j < num_options; ++j) p.vote[j] += probs[j];
  }
  p.chosen = static_cast<int>(std::max_element(p.vote.begin(), p.vote.end()) - p.vote.begin());

  const double scale = std::pow(10.0, kTieDecimals);
  std::vector<long long> rounded(num_options);
  for (size_t j = 0; j < num_options; ++j) rounded[j] = std::llround(p.vote[j] * scale);
  long long top = *std::max_element(rounded.begin(), rounded.end());
  p.tie = std::count(rounded.begin(), rounded.end(), top) >= 2;
  return p;
}

Prediction Answer(const Question& q, const EvidenceSet& evidence,
                  const OptionScorer& scorer, const AnswerOptions& opts) {
  std::vector<PassageTrace> trace(evidence.size());
  ParallelFor(evidence.size(), opts.max_concurrency, [&](size_t i) {
    const Evidence& e = evidence.passages[i];
    OptionScores scores;
    try {
      scores = scorer.Score(e.passage, q.text, q.options);
    } catch (const LengthMismatchError& err) {
      throw LengthMismatchError(err.expected(), err.got(),
                                "passage " + e.passage.passage_id + ": ");
    } catch (const MalformedResponseError& err) {
      throw MalformedResponseError("passage " + e.passage.passage_id + ": " + err.what());
    } catch (const TransportError& err) {
      throw TransportError("passage " + e.passage.passage_id + ": " + err.what());
    }
    if (scores.raw.size() != q.options.size()) {
      throw LengthMismatchError(q.options.size(), scores.raw.size(),
                                "passage " + e.passage.passage_id + ": ");
    }
    PassageTrace& t = trace[i];
    t.passage_id = e.passage.passage_id;
    for (const auto& h : e.hits) {
      if (std::find(t.options_hit.begin(), t.options_hit.end(), h.option) == t.options_hit.end()) {
        t.options_hit.push_back(h.option);
      }
    }
    t.dist = SoftmaxNormalize(scores);
  });
  return Vote(q.options.size(), std::move(trace));
}

std::string_view ToString(Marker m) {
  switch (m) {
    case Marker::kCorrect:
      return "correct";
    case Marker::kIncorrect:
      return "incorrect";
    case Marker::kTie:
      return "tie";
  }
  return "incorrect";
}

std::optional<Marker> MarkerFor(const Prediction& p, std::optional<int> gold) {
  if (!gold) return std::nullopt;
  if (p.tie) return Marker::kTie;
  return p.chosen == *gold ? Marker::kCorrect : Marker::kIncorrect;
}

namespace {

std::string OptionLetter(size_t j) {
  return j < 26 ? std::string(1, static_cast<char>('A' + j)) : std::to_string(j);
}

std::string Abbreviate(std::string_view text, size_t max_chars) {
  auto offsets = utf8::Offsets(text);
  std::string out;
  if (offsets.size() - 1 <= max_chars) {
    out = std::string(text);
  } else {
    out = std::string(text.substr(0, offsets[max_chars])) + "...";
  }
  std::replace(out.begin(), out.end(), '\n', ' ');
  return out;
}

}  // namespace

TraceReport Explain(const Question& q, const EvidenceSet& evidence,
                    const Prediction& p, std::optional<int> gold) {
  const size_t n = q.options.size();
  auto marker = MarkerFor(p, gold);
  TraceReport r;

  std::string& t = r.text;
  if (marker) t += fmt::format("[{}] ", ToString(*marker));
  t += fmt::format("Q: {}\n", q.text);
  for (size_t j = 0; j < n; ++j) t += fmt::format("  {}) {}\n", OptionLetter(j), q.options[j]);
  if (p.trace.empty()) {
    t += "  no context retrieved; vote is uniform\n";
  } else {
    t += "  #  ";
    for (size_t j = 0; j < n; ++j) t += fmt::format("  Pr_{}", OptionLetter(j));
    t += "  hit-by  passage\n";
    for (size_t i = 0; i < p.trace.size(); ++i) {
      const auto& pt = p.trace[i];
      t += fmt::format("  {:<2} ", i + 1);
      for (double pr : pt.dist.probs) t += fmt::format("  {:.2f}", pr);
      std::string hit_by;
      for (int o : pt.options_hit) hit_by += OptionLetter(o);
      t += fmt::format("  {:<6}  {}\n", hit_by, pt.passage_id);
      if (i < evidence.size() && evidence.passages[i].passage.passage_id == pt.passage_id) {
        t += fmt::format("       {}\n", Abbreviate(evidence.passages[i].passage.text, 160));
      }
    }
  }
  t += "  vote:";
  for (double v : p.vote) t += fmt::format(" {:.2f}", v);
  t += fmt::format("\n  chosen: {}{}", OptionLetter(p.chosen), p.tie ? " (tie)" : "");
  if (gold) t += fmt::format("  gold: {}", OptionLetter(*gold));
  t += "\n";

  nlohmann::json j;
  j["question_id"] = q.id;
  j["passages"] = nlohmann::json::array();
  for (const auto& pt : p.trace) {
    j["passages"].push_back({{"passage_id", pt.passage_id},
                             {"options_hit", pt.options_hit},
                             {"probs", pt.dist.probs}});
  }
  j["vote"] = p.vote;
  j["chosen"] = p.chosen;
  j["tie"] = p.tie;
  if (gold) {
    j["gold"] = *gold;
    j["marker"] = std::string(ToString(*marker));
  }
  r.jsonl = io::Dump(j) + "\n";
  return r;
}

TraceReport Explain(const Question& q, const EvidenceSet& evidence,
                    const OptionScorer& scorer, std::optional<int> gold) {
  return Explain(q, evidence, Answer(q, evidence, scorer), gold);
}

}  // namespace bgqa
