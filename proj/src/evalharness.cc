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

#include "bgqa/evalharness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "bgqa/error.h"
#include "bgqa/parallel.h"
#include "fmt/format.h"
#include "jsonl.h"

namespace bgqa {

using nlohmann::json;

namespace {

// Table column order.
constexpr Category kColumns[] = {Category::kBiology12th, Category::kPhilosophy12th,
                                 Category::kGeography12th, Category::kHistory12th,
                                 Category::kHistoryQuiz};

std::vector<Category> ReportColumns(const EvalReport& r) {
  std::vector<Category> cols(std::begin(kColumns), std::end(kColumns));
  for (const auto& row : r.rows) {
    if (row.categories.count(Category::kOther)) {
      cols.push_back(Category::kOther);
      break;
    }
  }
  return cols;
}

double Round2(double x) { return std::round(x * 100.0) / 100.0; }

json TallyJson(const Tally& t) {
  return json{{"correct", t.correct},
              {"total", t.total},
              {"ties", t.ties},
              {"fraction", fmt::format("{}/{}", t.correct, t.total)},
              {"accuracy", Round2(t.accuracy())},
              {"accuracy_exact", t.accuracy()}};
}

}  // namespace

void EvalConfig::Validate() const {
  retrieval.Validate();
  if (sweep.empty()) throw UsageError("sweep list is empty");
  for (size_t i = 0; i < sweep.size(); ++i) {
    if (sweep[i] == 0) throw UsageError("sweep values must be positive");
    if (i > 0 && sweep[i] <= sweep[i - 1]) throw UsageError("sweep values must be sorted and unique");
  }
}

std::vector<size_t> NormalizeSweep(std::vector<size_t> values) {
  if (values.empty()) throw UsageError("sweep list is empty");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.front() == 0) throw UsageError("sweep values must be positive");
  return values;
}

double Tally::accuracy() const {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

EvalRow EvaluateRow(const Dataset& d, const Index& index, const RetrievalConfig& retrieval,
                    const OptionScorer& scorer, size_t jobs, size_t scorer_concurrency) {
  if (d.questions.empty()) throw DataError("cannot evaluate an empty dataset");
  retrieval.Validate();
  const auto start = std::chrono::steady_clock::now();

  struct Outcome {
    int chosen = 0;
    bool tie = false;
    size_t passages = 0;
  };
  std::vector<Outcome> outcomes(d.questions.size());
  AnswerOptions opts{scorer_concurrency};
  ParallelFor(d.questions.size(), jobs, [&](size_t i) {
    const Question& q = d.questions[i];
    try {
      EvidenceSet evidence = RetrieveEvidence(index, q, retrieval);
      Prediction p = Answer(q, evidence, scorer, opts);
      outcomes[i] = {p.chosen, p.tie, evidence.size()};
    } catch (const TransportError& e) {
      throw TransportError("question " + q.id + ": " + e.what());
    } catch (const UsageError& e) {
      throw UsageError("question " + q.id + ": " + e.what());
    } catch (const Error& e) {
      throw DataError("question " + q.id + ": " + e.what());
    }
  });

  EvalRow row;
  row.top_n = retrieval.per_option_top_n;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    const Question& q = d.questions[i];
    const Outcome& o = outcomes[i];
    bool correct = o.chosen == q.gold;
    for (Tally* t : {&row.overall, &row.categories[q.category]}) {
      ++t->total;
      if (correct) ++t->correct;
      if (o.tie) ++t->ties;
    }
    row.passages_scored += o.passages;
  }
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

namespace {

EvalReport ReportHeader(const Dataset& d, const EvalConfig& cfg) {
  EvalReport r;
  r.dataset = d.name;
  r.scorer = cfg.scorer.ToString();
  r.fields = FormatFieldBoosts(cfg.retrieval.fields);
  r.similarity = std::string(ToString(cfg.retrieval.similarity));
  r.seed = cfg.seed;
  return r;
}

}  // namespace

EvalReport Evaluate(const Dataset& d, const Index& index, const EvalConfig& cfg) {
  return Sweep(d, index, cfg, {cfg.retrieval.per_option_top_n});
}

EvalReport Sweep(const Dataset& d, const Index& index, const EvalConfig& base,
                 const std::vector<size_t>& s_values) {
  if (s_values.empty()) throw UsageError("sweep needs at least one value");
  base.retrieval.Validate();
  auto scorer = MakeScorer(base.scorer, &index);
  size_t concurrency =
      base.scorer.kind == ScorerHandle::Kind::kRemote ? base.scorer.max_concurrency : 1;
  EvalReport r = ReportHeader(d, base);
  for (size_t s : s_values) {
    RetrievalConfig rc = base.retrieval;
    rc.per_option_top_n = s;
    EvalRow row = EvaluateRow(d, index, rc, *scorer, base.jobs, concurrency);
    row.label = base.label;
    r.rows.push_back(std::move(row));
  }
  return r;
}

RandomBaseline RunRandomBaseline(const Dataset& d, uint64_t seed, size_t trials) {
  if (d.questions.empty()) throw DataError("cannot run a baseline on an empty dataset");
  if (trials == 0) throw UsageError("baseline needs at least one trial");
  RandomBaseline b;
  b.seed = seed;
  b.trials = trials;
  const double n = static_cast<double>(d.questions.size());
  double expect = 0, var = 0;
  for (const Question& q : d.questions) {
    double p = 1.0 / static_cast<double>(q.options.size());
    expect += p;
    var += p * (1 - p);
  }
  b.analytic = 100.0 * expect / n;
  b.analytic_sd = 100.0 * std::sqrt(var) / n;
  b.empirical_sd_of_mean = b.analytic_sd / std::sqrt(static_cast<double>(trials));

  std::mt19937_64 rng(seed);
  std::map<Category, std::pair<size_t, size_t>> cat;  // correct, total
  size_t correct = 0;
  for (size_t t = 0; t < trials; ++t) {
    for (const Question& q : d.questions) {
      std::uniform_int_distribution<int> pick(0, static_cast<int>(q.options.size()) - 1);
      bool hit = pick(rng) == q.gold;
      correct += hit;
      auto& c = cat[q.category];
      c.first += hit;
      ++c.second;
    }
  }
  b.empirical = 100.0 * static_cast<double>(correct) / (n * static_cast<double>(trials));
  for (const auto& [c, ct] : cat) {
    b.categories[c] = 100.0 * static_cast<double>(ct.first) / static_cast<double>(ct.second);
  }
  return b;
}

std::string ReportJsonl(const EvalReport& r) {
  std::string out;
  for (const auto& row : r.rows) {
    json j;
    j["dataset"] = r.dataset;
    j["scorer"] = r.scorer;
    j["fields"] = r.fields;
    j["similarity"] = r.similarity;
    j["seed"] = r.seed;
    j["label"] = row.label;
    j["top_n"] = row.top_n;
    j["overall"] = TallyJson(row.overall);
    json cats = json::object();
    for (const auto& [c, t] : row.categories) cats[std::string(ToString(c))] = TallyJson(t);
    j["categories"] = cats;
    j["passages_scored"] = row.passages_scored;
    out += io::Dump(j);
    out += '\n';
  }
  return out;
}

std::string RuntimeJson(const EvalReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"label", row.label},
                    {"top_n", row.top_n},
                    {"wall_seconds", row.wall_seconds},
                    {"questions", row.overall.total},
                    {"passages_scored", row.passages_scored}});
  }
  return json{{"rows", rows}}.dump(2) + "\n";
}

std::string ReportMarkdown(const EvalReport& r) {
  auto cols = ReportColumns(r);
  std::string out = "| #docs | Overall |";
  for (Category c : cols) out += fmt::format(" {} |", ToString(c));
  out += "\n|---:|---:|";
  for (size_t i = 0; i < cols.size(); ++i) out += "---:|";
  out += '\n';
  for (const auto& row : r.rows) {
    out += fmt::format("| {} | {:.2f} |", row.top_n, row.overall.accuracy());
    for (Category c : cols) {
      auto it = row.categories.find(c);
      out += it == row.categories.end() ? std::string(" - |")
                                        : fmt::format(" {:.2f} |", it->second.accuracy());
    }
    out += '\n';
  }
  return out;
}

std::string ReportCsv(const EvalReport& r) {
  auto cols = ReportColumns(r);
  std::string out = "#docs,Overall";
  for (Category c : cols) out += fmt::format(",{}", ToString(c));
  out += '\n';
  for (const auto& row : r.rows) {
    out += fmt::format("{},{:.2f}", row.top_n, row.overall.accuracy());
    for (Category c : cols) {
      auto it = row.categories.find(c);
      out += it == row.categories.end() ? std::string(",") : fmt::format(",{:.2f}", it->second.accuracy());
    }
    out += '\n';
  }
  return out;
}

}  // namespace bgqa
