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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "bgqa/dataset.h"
#include "bgqa/error.h"

namespace bgqa {
namespace {

namespace fs = std::filesystem;

fs::path TempFile(const std::string& name, const std::string& content) {
  fs::path dir = fs::temp_directory_path() / "bgqa_dataset_test";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

Question Q(std::string id, Category c, std::string text, std::vector<std::string> options,
           int gold) {
  return Question{std::move(id), c, std::move(text), std::move(options), gold};
}

TEST(CategoryTest, NamesRoundTrip) {
  for (Category c : kAllCategories) EXPECT_EQ(ParseCategory(ToString(c)), c);
  EXPECT_EQ(ParseCategory("biology-12th"), Category::kBiology12th);
  EXPECT_FALSE(ParseCategory("Biology").has_value());
}

TEST(ValidateTest, FlagsEachRule) {
  Dataset d;
  d.questions = {
      Q("ok", Category::kOther, "Въпрос?", {"а", "б", "в"}, 2),
      Q("two", Category::kOther, "Въпрос?", {"а", "б"}, 0),
      Q("five", Category::kOther, "Въпрос?", {"а", "б", "в", "г", "д"}, 0),
      Q("gold", Category::kOther, "Въпрос?", {"а", "б", "в"}, 3),
      Q("neg", Category::kOther, "Въпрос?", {"а", "б", "в"}, -1),
      Q("blank", Category::kOther, " \n\t", {"а", "б", "в"}, 0),
      Q("opt", Category::kOther, "Въпрос?", {"а", "  ", "в"}, 0),
      Q("ok", Category::kOther, "Въпрос?", {"а", "б", "в"}, 0),
  };
  std::vector<Violation> expected = {
      {"two", "option-count"}, {"five", "option-count"}, {"gold", "gold-range"},
      {"neg", "gold-range"},   {"blank", "empty-question"}, {"opt", "empty-option"},
      {"ok", "duplicate-id"},
  };
  EXPECT_EQ(Validate(d), expected);
  d.questions.resize(1);
  EXPECT_TRUE(Validate(d).empty());
}

TEST(LoadDatasetTest, ReadsRecordsInOrder) {
  auto p = TempFile("ok.jsonl",
                    R"({"id":"b1","category":"biology-12th","question":"Кое е вярно?","options":["а","б","в","г"],"gold":1})"
                    "\n\n"
                    R"({"id":"h1","category":"history-quiz","question":"Кога?","options":["1876","1878","1885"],"gold":0})"
                    "\n");
  Dataset d = LoadDataset(p);
  ASSERT_EQ(d.questions.size(), 2u);
  EXPECT_EQ(d.questions[0].id, "b1");
  EXPECT_EQ(d.questions[0].gold, 1);
  EXPECT_EQ(d.questions[1].category, Category::kHistoryQuiz);
  EXPECT_EQ(d.questions[1].options.size(), 3u);
}

TEST(LoadDatasetTest, MalformedLineReportsLineNumber) {
  auto p = TempFile("bad.jsonl",
                    R"({"id":"a","category":"other","question":"q","options":["a","b","c"],"gold":0})"
                    "\n{not json\n");
  try {
    LoadDataset(p);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
}

TEST(LoadDatasetTest, RejectsBadRecords) {
  const std::vector<std::string> bad = {
      R"({"id":"a","category":"other","question":"q","options":["a","b","c"]})",
      R"({"id":"a","category":"chemistry","question":"q","options":["a","b","c"],"gold":0})",
      R"({"id":1,"category":"other","question":"q","options":["a","b","c"],"gold":0})",
      R"({"id":"a","category":"other","question":"q","options":"abc","gold":0})",
      R"({"id":"a","category":"other","question":"q","options":["a","b",3],"gold":0})",
      R"({"id":"a","category":"other","question":"q","options":["a","b","c"],"gold":1.5})",
      R"({"id":"a","category":"other","question":"q","options":["a","b","c"],"gold":3})",
      R"(["a"])",
  };
  for (size_t i = 0; i < bad.size(); ++i) {
    auto p = TempFile("bad" + std::to_string(i) + ".jsonl", bad[i] + "\n");
    EXPECT_THROW(LoadDataset(p), DataError) << bad[i];
  }
  EXPECT_THROW(LoadDataset("/nonexistent/questions.jsonl"), DataError);
}

TEST(LoadDatasetTest, InvariantViolationListsIds) {
  auto p = TempFile("dup.jsonl",
                    R"({"id":"x7","category":"other","question":"q","options":["a","b","c"],"gold":0})"
                    "\n"
                    R"({"id":"x7","category":"other","question":"q","options":["a","b","c"],"gold":0})"
                    "\n");
  try {
    LoadDataset(p);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("x7 (duplicate-id)"), std::string::npos);
  }
}

TEST(SaveDatasetTest, RoundTrip) {
  std::mt19937 rng(3);
  const std::vector<std::string> words = {"Кой", "е", "авторът", "на", "\"Под игото\"", "?",
                                          "\\", "Ботев", "1876", "\t", "ß", "😀"};
  Dataset d;
  d.name = "round";
  for (int i = 0; i < 40; ++i) {
    auto text = [&] {
      std::string s = "w";
      for (int k = rng() % 6; k > 0; --k) s += " " + words[rng() % words.size()];
      return s;
    };
    Question q;
    q.id = "q" + std::to_string(i);
    q.category = kAllCategories[rng() % kAllCategories.size()];
    q.text = text();
    size_t n = 3 + rng() % 2;
    for (size_t k = 0; k < n; ++k) q.options.push_back(text());
    q.gold = static_cast<int>(rng() % n);
    d.questions.push_back(q);
  }
  auto p = fs::temp_directory_path() / "bgqa_dataset_test" / "round.jsonl";
  SaveDataset(d, p);
  EXPECT_EQ(LoadDataset(p), d);
}

TEST(StatWordsTest, StripsEdgePunctuation) {
  EXPECT_EQ(StatWords("Кой е авторът на „Под игото“?"),
            (std::vector<std::string>{"Кой", "е", "авторът", "на", "Под", "игото"}));
  EXPECT_EQ(StatWords("  - ... , "), std::vector<std::string>{});
  EXPECT_EQ(StatWords("д-р Петров,\tгр. Пловдив"),
            (std::vector<std::string>{"д-р", "Петров", "гр", "Пловдив"}));
  EXPECT_EQ(StatWords("(1850-1921)"), std::vector<std::string>{"1850-1921"});
}

// Statistics of a small dataset computed by hand.
TEST(ComputeStatsTest, HandComputedValues) {
  Dataset d;
  d.questions = {
      Q("b1", Category::kBiology12th, "Кой орган е това?", {"сърце", "бял дроб", "черен дроб", "мозък"}, 0),
      Q("b2", Category::kBiology12th, "Това е?", {"Сърце", "ген", "клетка", "ДНК"}, 2),
      Q("h1", Category::kHistoryQuiz, "Кога?", {"1876 г.", "1878", "1885"}, 1),
      Q("h2", Category::kHistoryQuiz, "Кой е Левски?", {"апостол", "цар", "поет", "хан"}, 0),
  };
  StatsReport r = ComputeStats(d);
  ASSERT_EQ(r.categories.size(), 2u);
  const StatsRow& bio = r.categories[0];
  EXPECT_EQ(bio.label, "biology-12th");
  EXPECT_EQ(bio.count, 2u);
  EXPECT_DOUBLE_EQ(bio.choices, 4.0);
  EXPECT_DOUBLE_EQ(bio.len_question, (4 + 2) / 2.0);
  EXPECT_DOUBLE_EQ(bio.len_options, (1 + 2 + 2 + 1 + 1 + 1 + 1 + 1) / 8.0);
  // кой орган е това сърце бял дроб черен мозък ген клетка днк
  EXPECT_EQ(bio.vocab_qa, 12u);
  EXPECT_EQ(bio.total_words, 6u + 10u);

  const StatsRow& hist = r.categories[1];
  EXPECT_DOUBLE_EQ(hist.choices, 3.5);
  EXPECT_DOUBLE_EQ(hist.len_question, 2.0);
  EXPECT_DOUBLE_EQ(hist.len_options, 8.0 / 7.0);

  ASSERT_EQ(r.groups.size(), 3u);
  EXPECT_EQ(r.groups[0].label, "biology-12th/4");
  EXPECT_EQ(r.groups[1].label, "history-quiz/4");
  EXPECT_EQ(r.groups[1].count, 1u);
  EXPECT_EQ(r.groups[2].label, "history-quiz/3");
  EXPECT_DOUBLE_EQ(r.groups[2].len_options, 4.0 / 3.0);

  EXPECT_EQ(r.overall.count, 4u);
  EXPECT_DOUBLE_EQ(r.overall.choices, 15.0 / 4.0);
  EXPECT_DOUBLE_EQ(r.overall.len_options, 18.0 / 15.0);
  EXPECT_EQ(r.overall.total_words, 16u + 4u + 8u);
}

TEST(ComputeStatsTest, PermutationInvariantAndEmptyFails) {
  Dataset d;
  std::mt19937 rng(11);
  for (int i = 0; i < 60; ++i) {
    d.questions.push_back(Q("q" + std::to_string(i), kAllCategories[i % 5],
                            "въпрос " + std::to_string(rng() % 20),
                            {"а" + std::to_string(rng() % 9), "б", "в", "г"}, 0));
  }
  StatsReport a = ComputeStats(d);
  std::shuffle(d.questions.begin(), d.questions.end(), rng);
  StatsReport b = ComputeStats(d);
  EXPECT_EQ(a.overall.vocab_qa, b.overall.vocab_qa);
  EXPECT_EQ(a.overall.total_words, b.overall.total_words);
  ASSERT_EQ(a.categories.size(), b.categories.size());
  for (size_t i = 0; i < a.categories.size(); ++i) {
    EXPECT_EQ(a.categories[i].label, b.categories[i].label);
    EXPECT_EQ(a.categories[i].vocab_qa, b.categories[i].vocab_qa);
    EXPECT_DOUBLE_EQ(a.categories[i].len_question, b.categories[i].len_question);
  }
  EXPECT_THROW(ComputeStats(Dataset{}), DataError);
}

}  // namespace
}  // namespace bgqa
