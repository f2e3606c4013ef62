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

#include "bgqa/textproc.h"

#include <algorithm>
#include <sstream>

#include "bgqa/error.h"
#include "bgqa/utf8.h"
#include "bundled_data.h"
#include "jsonl.h"

namespace bgqa {
namespace {

std::u32string Decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (size_t pos = 0; pos < text.size();) out.push_back(utf8::Next(text, pos));
  return out;
}

std::string Encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size() * 2);
  for (char32_t cp : text) utf8::Append(out, cp);
  return out;
}

std::string_view Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool SuffixMatches(const std::u32string& word, const std::u32string& suffix,
                   std::u32string& wild) {
  if (suffix.size() > word.size()) return false;
  size_t base = word.size() - suffix.size();
  wild.clear();
  for (size_t i = 0; i < suffix.size(); ++i) {
    char32_t c = word[base + i];
    if (suffix[i] == U'?') {
      wild.push_back(c);
    } else if (suffix[i] != c) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string_view ToString(AnalyzerKind kind) {
  switch (kind) {
    case AnalyzerKind::kNone:
      return "none";
    case AnalyzerKind::kBg:
      return "bg";
    case AnalyzerKind::kNgram:
      return "ngram";
  }
  return "none";
}

AnalyzerKind ParseAnalyzerKind(std::string_view name) {
  if (name == "none") return AnalyzerKind::kNone;
  if (name == "bg") return AnalyzerKind::kBg;
  if (name == "ngram") return AnalyzerKind::kNgram;
  throw UsageError("unknown analyzer: " + std::string(name));
}

// ---------------------------------------------------------------------------
// Stop words

StopWordList::StopWordList(std::set<std::string, std::less<>> words,
                           std::string source)
    : words_(std::move(words)), source_(std::move(source)) {
  for (const auto& w : words_) {
    if (w.empty()) throw DataError("stop-word list " + source_ + ": empty entry");
    if (utf8::Lower(w) != w) {
      throw DataError("stop-word list " + source_ + ": entry not lowercase: " + w);
    }
  }
}

StopWordList StopWordList::Parse(std::string_view text, std::string source) {
  std::set<std::string, std::less<>> words;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = Trim(text.substr(start, end - start));
    if (!line.empty() && line.front() != '#') words.emplace(line);
    start = end + 1;
  }
  return StopWordList(std::move(words), std::move(source));
}

StopWordList StopWordList::FromFile(const std::filesystem::path& path) {
  return Parse(io::ReadFile(path), path.string());
}

StopWordList StopWordList::Bulgarian() {
  return Parse(bundled::kBulgarianStopwords, "bundled:bulgarian");
}

std::string StopWordList::Serialize() const {
  std::string out;
  for (const auto& w : words_) {
    out += w;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stemming

SuffixStemmer SuffixStemmer::Parse(std::string_view rules_text) {
  SuffixStemmer stemmer;
  stemmer.rules_text_ = std::string(rules_text);
  std::istringstream in{std::string(rules_text)};
  std::string line;
  size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw DataError("stemmer rules line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::istringstream fields{std::string(trimmed)};
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);

    if (tok[0] == "min_word") {
      if (tok.size() != 2) fail("expected: min_word <n>");
      try {
        stemmer.min_word_ = std::stoul(tok[1]);
      } catch (const std::exception&) {
        fail("bad min_word value");
      }
      continue;
    }
    // <stage> <min_len> <suffix> -> [replacement] [stop]
    if (tok.size() < 4 || tok[3] != "->") {
      fail("expected: <stage> <min_len> <suffix> -> [replacement] [stop]");
    }
    Rule rule;
    try {
      rule.min_len = std::stoul(tok[1]);
    } catch (const std::exception&) {
      fail("bad min_len");
    }
    rule.suffix = Decode(tok[2]);
    size_t next = 4;
    if (next < tok.size() && tok[next] != "stop") {
      rule.replacement = Decode(tok[next]);
      ++next;
    }
    if (next < tok.size() && tok[next] == "stop") {
      rule.stop = true;
      ++next;
    }
    if (next != tok.size()) fail("trailing tokens");
    if (rule.replacement.size() > rule.suffix.size()) {
      fail("replacement longer than suffix");
    }
    auto count_wild = [](const std::u32string& s) {
      return std::count(s.begin(), s.end(), U'?');
    };
    if (count_wild(rule.replacement) > count_wild(rule.suffix)) {
      fail("replacement uses more '?' than the suffix binds");
    }

    if (stemmer.stages_.empty() || stemmer.stages_.back().name != tok[0]) {
      for (const auto& st : stemmer.stages_) {
        if (st.name == tok[0]) fail("stage '" + tok[0] + "' is not contiguous");
      }
      stemmer.stages_.push_back(Stage{tok[0], {}});
    }
    stemmer.stages_.back().rules.push_back(std::move(rule));
  }
  return stemmer;
}

SuffixStemmer SuffixStemmer::FromFile(const std::filesystem::path& path) {
  return Parse(io::ReadFile(path));
}

SuffixStemmer SuffixStemmer::Bulgarian() {
  return Parse(bundled::kBulgarianStemmerRules);
}

std::u32string SuffixStemmer::StemOnce(std::u32string word) const {
  if (word.size() < min_word_) return word;
  std::u32string wild;
  for (const Stage& stage : stages_) {
    for (const Rule& rule : stage.rules) {
      if (word.size() < rule.min_len) continue;
      if (!SuffixMatches(word, rule.suffix, wild)) continue;
      word.resize(word.size() - rule.suffix.size());
      size_t w = 0;
      for (char32_t c : rule.replacement) {
        word.push_back(c == U'?' ? wild[w++] : c);
      }
      if (rule.stop) return word;
      break;
    }
  }
  return word;
}

std::string SuffixStemmer::Stem(std::string_view token) const {
  std::u32string word = Decode(token);
  // Every rule strictly shortens the word or leaves it alone, so this ends.
  for (;;) {
    std::u32string next = StemOnce(word);
    if (next == word) break;
    word = std::move(next);
  }
  return Encode(word);
}

// ---------------------------------------------------------------------------
// Tokenization and analysis

TermList Tokenize(std::string_view text) {
  TermList terms;
  std::string current;
  for (size_t pos = 0; pos < text.size();) {
    size_t start = pos;
    char32_t cp = utf8::Next(text, pos);
    if (utf8::IsWordChar(cp)) {
      current.append(text.substr(start, pos - start));
    } else if (!current.empty()) {
      terms.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) terms.push_back(std::move(current));
  return terms;
}

TermList Ngrams(const TermList& terms, int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) {
    throw UsageError("ngram range must satisfy 1 <= n_min <= n_max");
  }
  TermList out;
  const size_t k = terms.size();
  for (int n = n_min; n <= n_max; ++n) {
    if (static_cast<size_t>(n) > k) break;
    for (size_t i = 0; i + n <= k; ++i) {
      std::string gram = terms[i];
      for (int j = 1; j < n; ++j) {
        gram += ' ';
        gram += terms[i + j];
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

Analyzer::Analyzer(StopWordList stops, std::shared_ptr<const Stemmer> stemmer)
    : stops_(std::move(stops)), stemmer_(std::move(stemmer)) {
  if (!stemmer_) stemmer_ = std::make_shared<IdentityStemmer>();
}

Analyzer Analyzer::Bulgarian() {
  static const auto stemmer =
      std::make_shared<const SuffixStemmer>(SuffixStemmer::Bulgarian());
  return Analyzer(StopWordList::Bulgarian(), stemmer);
}

TermList Analyzer::Analyze(std::string_view text, AnalyzerKind kind) const {
  TermList tokens = Tokenize(text);
  if (kind == AnalyzerKind::kNone) return tokens;
  for (auto& t : tokens) t = utf8::Lower(t);
  if (kind == AnalyzerKind::kNgram) return Ngrams(tokens, 1, 3);

  TermList out;
  out.reserve(tokens.size());
  for (auto& t : tokens) {
    if (stops_.Contains(t)) continue;
    std::string stemmed = stemmer_->Stem(t);
    // A stem can coincide with a stop word; those are dropped as well.
    if (stemmed.empty() || stops_.Contains(stemmed)) continue;
    out.push_back(std::move(stemmed));
  }
  return out;
}

TermList Analyze(std::string_view text, AnalyzerKind kind,
                 const StopWordList& stops) {
  static const auto stemmer =
      std::make_shared<const SuffixStemmer>(SuffixStemmer::Bulgarian());
  return Analyzer(stops, stemmer).Analyze(text, kind);
}

}  // namespace bgqa
