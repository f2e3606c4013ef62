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

#ifndef BGQA_EVALHARNESS_H_
#define BGQA_EVALHARNESS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bgqa/dataset.h"
#include "bgqa/index.h"
#include "bgqa/pipeline.h"
#include "bgqa/reader.h"

namespace bgqa {

struct EvalConfig {
  RetrievalConfig retrieval = RetrievalConfig::Best();
  ScorerHandle scorer;
  std::vector<size_t> sweep = {1, 2, 5, 10, 20};
  uint64_t seed = 0;
  size_t jobs = 1;
  // Free-form name of the configuration, carried into reports.
  std::string label;

  // Throws UsageError unless sweep values are positive, unique and sorted.
  void Validate() const;
};

// Sorts and deduplicates; throws UsageError on zero or an empty list.
std::vector<size_t> NormalizeSweep(std::vector<size_t> values);

struct Tally {
  size_t correct = 0;
  size_t total = 0;
  size_t ties = 0;

  // 100 * correct / total; 0 for an empty tally.
  double accuracy() const;
};

struct EvalRow {
  std::string label;
  size_t top_n = 0;
  Tally overall;
  std::map<Category, Tally> categories;  // categories present in the dataset
  size_t passages_scored = 0;
  double wall_seconds = 0;  // not part of the machine-readable report
};

struct EvalReport {
  std::string dataset;
  std::string scorer;
  std::string fields;
  std::string similarity;
  uint64_t seed = 0;
  std::vector<EvalRow> rows;
};

// Answers every question at cfg.retrieval.per_option_top_n and tallies
// accuracy overall and per category. Tied predictions are scored by their
// resolved choice and also counted in `ties`. Errors carry the question id.
EvalReport Evaluate(const Dataset& d, const Index& index, const EvalConfig& cfg);

// Same scorer for every row; for prebuilt scorers.
EvalRow EvaluateRow(const Dataset& d, const Index& index, const RetrievalConfig& retrieval,
                    const OptionScorer& scorer, size_t jobs, size_t scorer_concurrency);

// One Evaluate row per value of S (hits per option query).
EvalReport Sweep(const Dataset& d, const Index& index, const EvalConfig& base,
                 const std::vector<size_t>& s_values);

struct RandomBaseline {
  double analytic = 0;          // 100 * mean over questions of 1/|options|
  double analytic_sd = 0;       // s.d. of one draw's accuracy, in points
  double empirical = 0;         // mean accuracy over trials
  double empirical_sd_of_mean = 0;  // analytic_sd / sqrt(trials)
  size_t trials = 0;
  uint64_t seed = 0;
  std::map<Category, double> categories;  // mean accuracy per category
};

// Uniform guessing, `trials` independent passes over the dataset.
RandomBaseline RunRandomBaseline(const Dataset& d, uint64_t seed, size_t trials = 1);

// Line-delimited records, one per row; byte-identical across runs with the
// same inputs (timings are excluded).
std::string ReportJsonl(const EvalReport& r);
// Wall-clock and volume metadata, kept apart from the deterministic report.
std::string RuntimeJson(const EvalReport& r);
// Columns: #docs, Overall, then the five exam/quiz categories (plus "other"
// when present). Two-decimal percentages.
std::string ReportMarkdown(const EvalReport& r);
std::string ReportCsv(const EvalReport& r);

}  // namespace bgqa

#endif  // BGQA_EVALHARNESS_H_
