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

#include "bgqa/dataset.h"

#include <set>
#include <unordered_set>

#include "bgqa/error.h"
#include "bgqa/utf8.h"
#include "jsonl.h"

namespace bgqa {
namespace {

using nlohmann::json;

bool IsBlank(std::string_view s) {
  for (size_t pos = 0; pos < s.size();) {
    if (!utf8::IsSpace(utf8::Next(s, pos))) return false;
  }
  return true;
}

Question ParseRecord(const json& j, const std::string& where) {
  auto fail = [&](const std::string& what) -> Question {
    throw DataError(where + ": " + what);
  };
  if (!j.is_object()) return fail("record is not an object");
  for (const char* key : {"id", "category", "question", "options", "gold"}) {
    if (!j.contains(key)) return fail(std::string("missing field '") + key + "'");
  }
  Question q;
  if (!j["id"].is_string()) return fail("'id' must be a string");
  q.id = j["id"].get<std::string>();
  if (!j["category"].is_string()) return fail("'category' must be a string");
  auto cat = ParseCategory(j["category"].get<std::string>());
  if (!cat) return fail("unknown category '" + j["category"].get<std::string>() + "'");
  q.category = *cat;
  if (!j["question"].is_string()) return fail("'question' must be a string");
  q.text = j["question"].get<std::string>();
  if (!j["options"].is_array()) return fail("'options' must be an array");
  for (const auto& o : j["options"]) {
    if (!o.is_string()) return fail("'options' entries must be strings");
    q.options.push_back(o.get<std::string>());
  }
  if (!j["gold"].is_number_integer()) return fail("'gold' must be an integer");
  q.gold = j["gold"].get<int>();
  return q;
}

struct Accum {
  size_t count = 0;
  size_t options = 0;
  size_t question_words = 0;
  size_t option_words = 0;
  std::unordered_set<std::string> vocab;

  void Add(const Question& q) {
    ++count;
    options += q.options.size();
    auto words = StatWords(q.text);
    question_words += words.size();
    for (auto& w : words) vocab.insert(utf8::Lower(w));
    for (const auto& opt : q.options) {
      auto ow = StatWords(opt);
      option_words += ow.size();
      for (auto& w : ow) vocab.insert(utf8::Lower(w));
    }
  }

  StatsRow Row(std::string label) const {
    StatsRow r;
    r.label = std::move(label);
    r.count = count;
    if (count > 0) {
      r.choices = static_cast<double>(options) / count;
      r.len_question = static_cast<double>(question_words) / count;
    }
    if (options > 0) r.len_options = static_cast<double>(option_words) / options;
    r.vocab_qa = vocab.size();
    r.total_words = question_words + option_words;
    return r;
  }
};

}  // namespace

std::string_view ToString(Category c) {
  switch (c) {
    case Category::kBiology12th:
      return "biology-12th";
    case Category::kPhilosophy12th:
      return "philosophy-12th";
    case Category::kGeography12th:
      return "geography-12th";
    case Category::kHistory12th:
      return "history-12th";
    case Category::kHistoryQuiz:
      return "history-quiz";
    case Category::kOther:
      return "other";
  }
  return "other";
}

std::optional<Category> ParseCategory(std::string_view name) {
  for (Category c : kAllCategories) {
    if (ToString(c) == name) return c;
  }
  return std::nullopt;
}

std::vector<Violation> Validate(const Dataset& d) {
  std::vector<Violation> out;
  std::set<std::string_view> seen;
  for (const Question& q : d.questions) {
    if (!seen.insert(q.id).second) out.push_back({q.id, "duplicate-id"});
    const int n = static_cast<int>(q.options.size());
    if (n < 3 || n > 4) out.push_back({q.id, "option-count"});
    if (q.gold < 0 || q.gold >= n) out.push_back({q.id, "gold-range"});
    if (IsBlank(q.text)) out.push_back({q.id, "empty-question"});
    for (const auto& o : q.options) {
      if (IsBlank(o)) {
        out.push_back({q.id, "empty-option"});
        break;
      }
    }
  }
  return out;
}

Dataset LoadDataset(const std::filesystem::path& path) {
  Dataset d;
  d.name = path.stem().string();
  io::ForEachJsonLine(path, [&](size_t lineno, const json& j) {
    d.questions.push_back(
        ParseRecord(j, path.string() + ":" + std::to_string(lineno)));
  });
  auto violations = Validate(d);
  if (!violations.empty()) {
    std::string msg = path.string() + ": invalid questions:";
    for (const auto& v : violations) msg += " " + v.question_id + " (" + v.rule + ")";
    throw DataError(msg);
  }
  return d;
}

std::string SerializeQuestion(const Question& q) {
  json j;
  j["id"] = q.id;
  j["category"] = std::string(ToString(q.category));
  j["question"] = q.text;
  j["options"] = q.options;
  j["gold"] = q.gold;
  return io::Dump(j);
}

void SaveDataset(const Dataset& d, const std::filesystem::path& path) {
  std::string out;
  for (const auto& q : d.questions) {
    out += SerializeQuestion(q);
    out += '\n';
  }
  io::WriteFile(path, out);
}

std::vector<std::string> StatWords(std::string_view text) {
  std::vector<std::string> words;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t before = pos;
    if (utf8::IsSpace(utf8::Next(text, pos))) continue;
    // Collect the whitespace-delimited token [before, end).
    size_t end = pos;
    while (end < text.size()) {
      size_t probe = end;
      if (utf8::IsSpace(utf8::Next(text, probe))) break;
      end = probe;
    }
    std::string_view token = text.substr(before, end - before);
    pos = end;
    // Strip leading/trailing non-word characters.
    auto offsets = utf8::Offsets(token);
    size_t first = 0, last = offsets.size() - 1;
    auto cp_at = [&](size_t i) {
      size_t p = offsets[i];
      return utf8::Next(token, p);
    };
    while (first < last && !utf8::IsWordChar(cp_at(first))) ++first;
    while (last > first && !utf8::IsWordChar(cp_at(last - 1))) --last;
    if (first < last) {
      words.emplace_back(token.substr(offsets[first], offsets[last] - offsets[first]));
    }
  }
  return words;
}

StatsReport ComputeStats(const Dataset& d) {
  if (d.questions.empty()) throw DataError("cannot compute statistics of an empty dataset");
  std::map<Category, Accum> per_category;
  std::map<std::pair<Category, size_t>, Accum> per_group;
  Accum overall;
  for (const Question& q : d.questions) {
    per_category[q.category].Add(q);
    per_group[{q.category, q.options.size()}].Add(q);
    overall.Add(q);
  }
  StatsReport report;
  for (const auto& [cat, acc] : per_category) {
    report.categories.push_back(acc.Row(std::string(ToString(cat))));
  }
  // Largest option count first, matching the usual table layout.
  for (Category cat : kAllCategories) {
    for (auto it = per_group.rbegin(); it != per_group.rend(); ++it) {
      const auto& [key, acc] = *it;
      if (key.first != cat) continue;
      report.groups.push_back(
          acc.Row(std::string(ToString(cat)) + "/" + std::to_string(key.second)));
    }
  }
  report.overall = overall.Row("overall");
  return report;
}

}  // namespace bgqa
