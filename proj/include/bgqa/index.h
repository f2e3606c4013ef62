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

#ifndef BGQA_INDEX_H_
#define BGQA_INDEX_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bgqa/chunker.h"
#include "bgqa/textproc.h"

namespace bgqa {

enum class FieldSource { kTitle, kPassageText };

// The four indexable fields. The name determines source and analyzer:
//   title.bg      = (title, bg)
//   passage       = (passage text, none)
//   passage.bg    = (passage text, bg)
//   passage.ngram = (passage text, ngram)
struct FieldSpec {
  std::string name;
  FieldSource source = FieldSource::kPassageText;
  AnalyzerKind analyzer = AnalyzerKind::kNone;

  // Throws UsageError for names outside the fixed set.
  static FieldSpec ByName(std::string_view name);
  static std::vector<FieldSpec> All();

  bool operator==(const FieldSpec&) const = default;
};

enum class Similarity { kBm25, kCosine };

std::string_view ToString(Similarity s);
Similarity ParseSimilarity(std::string_view name);

struct FieldBoost {
  std::string field;
  double boost = 1.0;

  bool operator==(const FieldBoost&) const = default;
};

// "title.bg^2,passage.ngram,passage,passage.bg^2". A missing boost is 1.
// Throws UsageError on unknown fields, non-positive boosts or duplicates.
std::vector<FieldBoost> ParseFieldBoosts(std::string_view spec);
std::string FormatFieldBoosts(const std::vector<FieldBoost>& fields);

struct Query {
  std::string text;
  std::vector<FieldBoost> fields;
  size_t top_n = 10;
  Similarity similarity = Similarity::kBm25;

  // Throws UsageError: needs at least one field, boosts > 0, top_n >= 1.
  void Validate() const;
};

struct FieldScore {
  std::string field;
  double boost = 0;
  double score = 0;  // unboosted
};

struct Hit {
  std::string passage_id;
  uint32_t doc = 0;
  double score = 0;  // sum of boost * field score
  std::vector<FieldScore> breakdown;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

// Postings and length statistics of one field.
class FieldIndex {
 public:
  struct Posting {
    uint32_t doc;
    uint32_t tf;

    bool operator==(const Posting&) const = default;
  };

  FieldIndex() = default;
  FieldIndex(FieldSpec spec, std::vector<std::string> terms,
             std::vector<std::vector<Posting>> postings,
             std::vector<uint32_t> doc_lengths);

  const FieldSpec& spec() const { return spec_; }
  size_t num_docs() const { return doc_lengths_.size(); }
  size_t num_terms() const { return terms_.size(); }
  double avgdl() const { return avgdl_; }
  uint32_t doc_length(uint32_t doc) const { return doc_lengths_[doc]; }
  const std::vector<uint32_t>& doc_lengths() const { return doc_lengths_; }

  // Terms in ascending byte order; postings_at(i) belongs to term(i).
  const std::string& term(size_t i) const { return terms_[i]; }
  const std::vector<Posting>& postings_at(size_t i) const { return postings_[i]; }

  // nullptr if the term does not occur in this field.
  const std::vector<Posting>* postings(std::string_view term) const;
  size_t df(std::string_view term) const;
  uint32_t tf(std::string_view term, uint32_t doc) const;

  // ln(1 + (N - df + 0.5) / (df + 0.5)); never negative.
  double Bm25Idf(size_t df) const;
  // ln(1 + N / df), used by the tf-idf cosine.
  double CosineIdf(size_t df) const;
  // Euclidean norm of the document's tf-idf vector.
  double cosine_norm(uint32_t doc) const { return cosine_norms_[doc]; }

 private:
  FieldSpec spec_;
  std::vector<std::string> terms_;
  std::vector<std::vector<Posting>> postings_;
  std::unordered_map<std::string, uint32_t> lookup_;
  std::vector<uint32_t> doc_lengths_;
  double avgdl_ = 0;
  std::vector<double> cosine_norms_;
};

// Immutable multi-field inverted index over a passage store. Documents are
// numbered in ascending passage_id order, so every postings list is sorted
// by passage_id.
class Index {
 public:
  // Throws DataError naming the first duplicate passage_id. Analysis runs on
  // up to `jobs` threads; the result does not depend on jobs or on the order
  // of `passages`.
  static Index Build(std::vector<Passage> passages,
                     const std::vector<FieldSpec>& fields, Analyzer analyzer,
                     size_t jobs = 1);

  size_t size() const { return passages_.size(); }
  const std::vector<Passage>& passages() const { return passages_; }
  const Passage& passage(uint32_t doc) const { return passages_[doc]; }
  std::optional<uint32_t> Find(std::string_view passage_id) const;

  const std::vector<FieldIndex>& fields() const { return fields_; }
  // nullptr if the field was not built.
  const FieldIndex* field(std::string_view name) const;
  const Analyzer& analyzer() const { return analyzer_; }
  const Bm25Params& bm25() const { return bm25_; }

  // Okapi BM25 of the unique terms of query_terms against one passage.
  // Terms absent from the field contribute 0. Throws UsageError for an
  // unknown field and DataError for an unknown passage.
  double Bm25FieldScore(std::string_view field, const TermList& query_terms,
                        std::string_view passage_id) const;
  // tf-idf cosine between query_terms and one passage.
  double CosineFieldScore(std::string_view field, const TermList& query_terms,
                          std::string_view passage_id) const;

  // Analyzes q.text once per field with that field's analyzer and returns the
  // top_n passages with a positive combined score, best first, ties broken
  // by ascending passage_id. Throws UsageError if q names a field this
  // index lacks.
  std::vector<Hit> Search(const Query& q) const;

  // Directory layout: manifest.json, passages.jsonl, stopwords.txt,
  // stemmer.rules and one field.<name>.bin per field.
  void Save(const std::filesystem::path& dir) const;
  // Throws IndexVersionError on a format version mismatch and
  // IndexCorruptError on truncated or damaged files.
  static Index Load(const std::filesystem::path& dir);

  static constexpr int kFormatVersion = 1;

 private:
  Index(std::vector<Passage> passages, std::vector<FieldIndex> fields,
        Analyzer analyzer);

  double FieldScore(const FieldIndex& f, Similarity sim,
                    const TermList& query_terms, uint32_t doc) const;

  std::vector<Passage> passages_;
  std::unordered_map<std::string, uint32_t> by_id_;
  std::vector<FieldIndex> fields_;
  Analyzer analyzer_;
  Bm25Params bm25_;
};

}  // namespace bgqa

#endif  // BGQA_INDEX_H_
