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

#ifndef BGQA_TEXTPROC_H_
#define BGQA_TEXTPROC_H_

#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bgqa {

// Analysis chains applied to index fields and queries.
//   kNone:  tokenization only (bag of words, case preserved)
//   kBg:    tokenize, lowercase, drop stop words, stem
//   kNgram: tokenize, lowercase, word 1-3 grams
enum class AnalyzerKind { kNone, kBg, kNgram };

std::string_view ToString(AnalyzerKind kind);
AnalyzerKind ParseAnalyzerKind(std::string_view name);

using TermList = std::vector<std::string>;

class StopWordList {
 public:
  StopWordList() = default;

  // Throws DataError if any entry is empty or not lowercase.
  StopWordList(std::set<std::string, std::less<>> words, std::string source);

  // One word per line; '#' starts a comment line; blank lines ignored.
  static StopWordList Parse(std::string_view text, std::string source);
  static StopWordList FromFile(const std::filesystem::path& path);

  // The bundled Bulgarian list.
  static StopWordList Bulgarian();

  bool Contains(std::string_view word) const {
    return words_.find(word) != words_.end();
  }
  const std::set<std::string, std::less<>>& words() const { return words_; }
  const std::string& source() const { return source_; }
  size_t size() const { return words_.size(); }

  // Round-trips through Parse.
  std::string Serialize() const;

 private:
  std::set<std::string, std::less<>> words_;
  std::string source_;
};

class Stemmer {
 public:
  virtual ~Stemmer() = default;

  // token must already be lowercase. Implementations are deterministic,
  // never lengthen the token, and are idempotent.
  virtual std::string Stem(std::string_view token) const = 0;
};

class IdentityStemmer final : public Stemmer {
 public:
  std::string Stem(std::string_view token) const override {
    return std::string(token);
  }
};

// Data-driven suffix stripper. See data/bulgarian_stemmer.rules for the
// rule-file format. Stemming applies the staged rule table repeatedly until
// the word stops changing, which makes the result idempotent.
class SuffixStemmer final : public Stemmer {
 public:
  struct Rule {
    std::u32string suffix;       // '?' matches any character
    std::u32string replacement;  // '?' copies the matched character
    size_t min_len = 0;          // in characters, of the whole word
    bool stop = false;
  };
  struct Stage {
    std::string name;
    std::vector<Rule> rules;
  };

  // Throws DataError with the offending line number.
  static SuffixStemmer Parse(std::string_view rules_text);
  static SuffixStemmer FromFile(const std::filesystem::path& path);
  static SuffixStemmer Bulgarian();

  std::string Stem(std::string_view token) const override;

  // One pass over the stage table.
  std::u32string StemOnce(std::u32string word) const;

  const std::vector<Stage>& stages() const { return stages_; }
  size_t min_word() const { return min_word_; }
  const std::string& rules_text() const { return rules_text_; }

 private:
  std::vector<Stage> stages_;
  size_t min_word_ = 0;
  std::string rules_text_;
};

// Splits on whitespace and punctuation; keeps letters, digits and combining
// marks of any script. Case is preserved.
TermList Tokenize(std::string_view text);

// All contiguous word n-grams for n in [n_min, n_max], joined by one space.
// Ordered by n, then by position. Requires 1 <= n_min <= n_max.
TermList Ngrams(const TermList& terms, int n_min = 1, int n_max = 3);

class Analyzer {
 public:
  Analyzer(StopWordList stops, std::shared_ptr<const Stemmer> stemmer);

  // Bundled stop words with the Bulgarian suffix stemmer.
  static Analyzer Bulgarian();

  TermList Analyze(std::string_view text, AnalyzerKind kind) const;

  const StopWordList& stopwords() const { return stops_; }
  const Stemmer& stemmer() const { return *stemmer_; }
  const std::shared_ptr<const Stemmer>& stemmer_ptr() const { return stemmer_; }

 private:
  StopWordList stops_;
  std::shared_ptr<const Stemmer> stemmer_;
};

// Convenience form using the bundled Bulgarian stemmer.
TermList Analyze(std::string_view text, AnalyzerKind kind,
                 const StopWordList& stops);

}  // namespace bgqa

#endif  // BGQA_TEXTPROC_H_
