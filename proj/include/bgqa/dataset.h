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

#ifndef BGQA_DATASET_H_
#define BGQA_DATASET_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bgqa {

enum class Category {
  kBiology12th,
  kPhilosophy12th,
  kGeography12th,
  kHistory12th,
  kHistoryQuiz,
  kOther,
};

inline constexpr std::array<Category, 6> kAllCategories = {
    Category::kBiology12th, Category::kPhilosophy12th,
    Category::kGeography12th, Category::kHistory12th,
    Category::kHistoryQuiz, Category::kOther};

// "biology-12th", "philosophy-12th", ..., "history-quiz", "other".
std::string_view ToString(Category c);
std::optional<Category> ParseCategory(std::string_view name);

// One multiple-choice item. gold is a 0-based option index.
struct Question {
  std::string id;
  Category category = Category::kOther;
  std::string text;
  std::vector<std::string> options;
  int gold = 0;

  bool operator==(const Question&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<Question> questions;

  bool operator==(const Dataset&) const = default;
};

struct Violation {
  std::string question_id;
  // One of: option-count, gold-range, empty-question, empty-option,
  // duplicate-id.
  std::string rule;

  bool operator==(const Violation&) const = default;
};

// Empty iff every Question invariant holds and ids are unique.
std::vector<Violation> Validate(const Dataset& d);

// Reads the line-delimited question file. Records keep file order. Throws
// DataError on malformed records (with line number) or on invariant
// violations (listing the offending ids).
Dataset LoadDataset(const std::filesystem::path& path);

// Inverse of LoadDataset.
void SaveDataset(const Dataset& d, const std::filesystem::path& path);
std::string SerializeQuestion(const Question& q);

// Words for statistics: split on Unicode whitespace, strip leading and
// trailing punctuation; tokens with nothing left are dropped.
std::vector<std::string> StatWords(std::string_view text);

struct StatsRow {
  std::string label;
  size_t count = 0;
  double choices = 0;       // mean options per question
  double len_question = 0;  // mean words per question
  double len_options = 0;   // mean words per option
  size_t vocab_qa = 0;      // unique lowercased words, question + options
  size_t total_words = 0;   // word tokens, question + options
};

struct StatsReport {
  // One row per category present, in enum order.
  std::vector<StatsRow> categories;
  // One row per (category, option count) pair present. Categories with a
  // single option count yield one row identical to the category row.
  std::vector<StatsRow> groups;
  StatsRow overall;
};

// Throws DataError on an empty dataset.
StatsReport ComputeStats(const Dataset& d);

}  // namespace bgqa

#endif  // BGQA_DATASET_H_
