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

#include "bgqa/index.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "bgqa/error.h"
#include "bgqa/parallel.h"

namespace bgqa {
namespace {

// Sorted, deduplicated copy of the analyzed query terms. Every score sum
// runs in this order.
std::vector<std::string> UniqueTerms(const TermList& terms) {
  std::vector<std::string> out(terms.begin(), terms.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view SourceText(const Passage& p, FieldSource source) {
  return source == FieldSource::kTitle ? std::string_view(p.title)
                                       : std::string_view(p.text);
}

double Bm25TermScore(const Bm25Params& params, double idf, double tf,
                     double dl, double avgdl) {
  double norm = avgdl > 0 ? dl / avgdl : 0.0;
  return idf * (tf * (params.k1 + 1)) /
         (tf + params.k1 * (1 - params.b + params.b * norm));
}

}  // namespace

// ---------------------------------------------------------------------------
// Fields and queries

FieldSpec FieldSpec::ByName(std::string_view name) {
  if (name == "title.bg") return {"title.bg", FieldSource::kTitle, AnalyzerKind::kBg};
  if (name == "passage") return {"passage", FieldSource::kPassageText, AnalyzerKind::kNone};
  if (name == "passage.bg") return {"passage.bg", FieldSource::kPassageText, AnalyzerKind::kBg};
  if (name == "passage.ngram") {
    return {"passage.ngram", FieldSource::kPassageText, AnalyzerKind::kNgram};
  }
  throw UsageError("unknown field '" + std::string(name) +
                   "' (expected title.bg, passage, passage.bg or passage.ngram)");
}

std::vector<FieldSpec> FieldSpec::All() {
  return {ByName("title.bg"), ByName("passage"), ByName("passage.bg"),
          ByName("passage.ngram")};
}

std::string_view ToString(Similarity s) {
  return s == Similarity::kBm25 ? "bm25" : "cosine";
}

Similarity ParseSimilarity(std::string_view name) {
  if (name == "bm25") return Similarity::kBm25;
  if (name == "cosine") return Similarity::kCosine;
  throw UsageError("unknown similarity '" + std::string(name) + "'");
}

std::vector<FieldBoost> ParseFieldBoosts(std::string_view spec) {
  std::vector<FieldBoost> out;
  size_t start = 0;
  while (start <= spec.size()) {
    size_t comma = spec.find(',', start);
    if (comma == std::string_view::npos) comma = spec.size();
    std::string_view item = spec.substr(start, comma - start);
    start = comma + 1;
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw UsageError("empty entry in field list '" + std::string(spec) + "'");
    FieldBoost fb;
    size_t caret = item.find('^');
    fb.field = FieldSpec::ByName(item.substr(0, caret)).name;
    if (caret != std::string_view::npos) {
      std::string num(item.substr(caret + 1));
      size_t used = 0;
      try {
        fb.boost = std::stod(num, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != num.size()) {
        throw UsageError("bad boost in '" + std::string(item) + "'");
      }
    }
    if (!(fb.boost > 0) || !std::isfinite(fb.boost)) {
      throw UsageError("boost must be positive in '" + std::string(item) + "'");
    }
    for (const auto& prev : out) {
      if (prev.field == fb.field) throw UsageError("field listed twice: " + fb.field);
    }
    out.push_back(std::move(fb));
  }
  return out;
}

std::string FormatFieldBoosts(const std::vector<FieldBoost>& fields) {
  std::string out;
  for (const auto& f : fields) {
    if (!out.empty()) out += ',';
    out += f.field;
    if (f.boost != 1.0) {
      char buf[32];
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), f.boost);
      out += '^';
      out.append(buf, end);
    }
  }
  return out;
}

void Query::Validate() const {
  if (fields.empty()) throw UsageError("query needs at least one field");
  for (const auto& f : fields) {
    if (!(f.boost > 0)) throw UsageError("boost for " + f.field + " must be positive");
  }
  if (top_n < 1) throw UsageError("top_n must be at least 1");
}

// ---------------------------------------------------------------------------
// FieldIndex

FieldIndex::FieldIndex(FieldSpec spec, std::vector<std::string> terms,
                       std::vector<std::vector<Posting>> postings,
                       std::vector<uint32_t> doc_lengths)
    : spec_(std::move(spec)),
      terms_(std::move(terms)),
      postings_(std::move(postings)),
      doc_lengths_(std::move(doc_lengths)) {
  lookup_.reserve(terms_.size());
  for (uint32_t i = 0; i < terms_.size(); ++i) lookup_.emplace(terms_[i], i);

  const size_t n = doc_lengths_.size();
  if (n > 0) {
    double total = 0;
    for (uint32_t dl : doc_lengths_) total += dl;
    avgdl_ = total / static_cast<double>(n);
  }
  std::vector<double> sq(n, 0.0);
  for (size_t t = 0; t < postings_.size(); ++t) {
    double idf = CosineIdf(postings_[t].size());
    for (const Posting& p : postings_[t]) {
      double w = p.tf * idf;
      sq[p.doc] += w * w;
    }
  }
  cosine_norms_.resize(n);
  for (size_t d = 0; d < n; ++d) cosine_norms_[d] = std::sqrt(sq[d]);
}

const std::vector<FieldIndex::Posting>* FieldIndex::postings(
    std::string_view term) const {
  auto it = lookup_.find(std::string(term));
  return it == lookup_.end() ? nullptr : &postings_[it->second];
}

size_t FieldIndex::df(std::string_view term) const {
  const auto* p = postings(term);
  return p ? p->size() : 0;
}

uint32_t FieldIndex::tf(std::string_view term, uint32_t doc) const {
  const auto* list = postings(term);
  if (!list) return 0;
  auto it = std::lower_bound(list->begin(), list->end(), doc,
                             [](const Posting& p, uint32_t d) { return p.doc < d; });
  return (it != list->end() && it->doc == doc) ? it->tf : 0;
}

double FieldIndex::Bm25Idf(size_t df) const {
  const double n = static_cast<double>(num_docs());
  const double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double FieldIndex::CosineIdf(size_t df) const {
  if (df == 0) return 0.0;
  return std::log(1.0 + static_cast<double>(num_docs()) / static_cast<double>(df));
}

// ---------------------------------------------------------------------------
// Index

Index::Index(std::vector<Passage> passages, std::vector<FieldIndex> fields,
             Analyzer analyzer)
    : passages_(std::move(passages)),
      fields_(std::move(fields)),
      analyzer_(std::move(analyzer)) {
  by_id_.reserve(passages_.size());
  for (uint32_t i = 0; i < passages_.size(); ++i) {
    by_id_.emplace(passages_[i].passage_id, i);
  }
}

Index Index::Build(std::vector<Passage> passages,
                   const std::vector<FieldSpec>& fields, Analyzer analyzer,
                   size_t jobs) {
  std::sort(passages.begin(), passages.end(),
            [](const Passage& a, const Passage& b) { return a.passage_id < b.passage_id; });
  for (size_t i = 1; i < passages.size(); ++i) {
    if (passages[i].passage_id == passages[i - 1].passage_id) {
      throw DataError("duplicate passage_id: " + passages[i].passage_id);
    }
  }
  for (size_t i = 0; i < fields.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (fields[i].name == fields[j].name) throw UsageError("field listed twice: " + fields[i].name);
    }
  }
  if (passages.size() > UINT32_MAX) throw DataError("too many passages");

  const size_t n = passages.size();
  std::vector<FieldIndex> built;
  for (const FieldSpec& spec : fields) {
    // Per-document analysis in parallel; the merge below walks documents in
    // order, so postings come out sorted by document.
    std::vector<std::vector<std::pair<std::string, uint32_t>>> doc_terms(n);
    std::vector<uint32_t> doc_lengths(n);
    ParallelFor(n, jobs, [&](size_t d) {
      TermList terms = analyzer.Analyze(SourceText(passages[d], spec.source), spec.analyzer);
      doc_lengths[d] = static_cast<uint32_t>(terms.size());
      std::sort(terms.begin(), terms.end());
      auto& out = doc_terms[d];
      for (size_t i = 0; i < terms.size();) {
        size_t j = i;
        while (j < terms.size() && terms[j] == terms[i]) ++j;
        out.emplace_back(std::move(terms[i]), static_cast<uint32_t>(j - i));
        i = j;
      }
    });

    std::map<std::string, std::vector<FieldIndex::Posting>> by_term;
    for (uint32_t d = 0; d < n; ++d) {
      for (auto& [term, tf] : doc_terms[d]) {
        by_term[std::move(term)].push_back({d, tf});
      }
      doc_terms[d].clear();
      doc_terms[d].shrink_to_fit();
    }
    std::vector<std::string> terms;
    std::vector<std::vector<FieldIndex::Posting>> postings;
    terms.reserve(by_term.size());
    postings.reserve(by_term.size());
    for (auto& [term, list] : by_term) {
      terms.push_back(term);
      postings.push_back(std::move(list));
    }
    built.emplace_back(spec, std::move(terms), std::move(postings), std::move(doc_lengths));
  }
  return Index(std::move(passages), std::move(built), std::move(analyzer));
}

std::optional<uint32_t> Index::Find(std::string_view passage_id) const {
  auto it = by_id_.find(std::string(passage_id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

const FieldIndex* Index::field(std::string_view name) const {
  for (const auto& f : fields_) {
    if (f.spec().name == name) return &f;
  }
  return nullptr;
}

double Index::FieldScore(const FieldIndex& f, Similarity sim,
                         const TermList& query_terms, uint32_t doc) const {
  if (sim == Similarity::kBm25) {
    double score = 0;
    for (const auto& term : UniqueTerms(query_terms)) {
      uint32_t tf = f.tf(term, doc);
      if (tf == 0) continue;
      score += Bm25TermScore(bm25_, f.Bm25Idf(f.df(term)), tf, f.doc_length(doc), f.avgdl());
    }
    return score;
  }
  std::map<std::string, uint32_t> qtf;
  for (const auto& t : query_terms) ++qtf[t];
  double dot = 0, qnorm_sq = 0;
  for (const auto& [term, count] : qtf) {
    double idf = f.CosineIdf(f.df(term));
    double qw = count * idf;
    qnorm_sq += qw * qw;
    uint32_t tf = f.tf(term, doc);
    if (tf > 0) dot += qw * (tf * idf);
  }
  double denom = std::sqrt(qnorm_sq) * f.cosine_norm(doc);
  return denom > 0 ? dot / denom : 0.0;
}

double Index::Bm25FieldScore(std::string_view field_name,
                             const TermList& query_terms,
                             std::string_view passage_id) const {
  const FieldIndex* f = field(field_name);
  if (!f) throw UsageError("index has no field '" + std::string(field_name) + "'");
  auto doc = Find(passage_id);
  if (!doc) throw DataError("unknown passage_id: " + std::string(passage_id));
  return FieldScore(*f, Similarity::kBm25, query_terms, *doc);
}

double Index::CosineFieldScore(std::string_view field_name,
                               const TermList& query_terms,
                               std::string_view passage_id) const {
  const FieldIndex* f = field(field_name);
  if (!f) throw UsageError("index has no field '" + std::string(field_name) + "'");
  auto doc = Find(passage_id);
  if (!doc) throw DataError("unknown passage_id: " + std::string(passage_id));
  return FieldScore(*f, Similarity::kCosine, query_terms, *doc);
}

std::vector<Hit> Index::Search(const Query& q) const {
  q.Validate();
  std::vector<const FieldIndex*> fields;
  for (const auto& fb : q.fields) {
    const FieldIndex* f = field(fb.field);
    if (!f) throw UsageError("index has no field '" + fb.field + "'");
    fields.push_back(f);
  }
  const size_t nf = fields.size();

  // Candidate accumulators, addressed through a per-document slot table.
  struct Candidate {
    uint32_t doc;
    double total;
  };
  std::vector<Candidate> cands;
  std::vector<double> field_scores;  // cands.size() * nf
  std::unordered_map<uint32_t, uint32_t> slot;

  auto slot_of = [&](uint32_t doc) -> uint32_t {
    auto [it, inserted] = slot.try_emplace(doc, static_cast<uint32_t>(cands.size()));
    if (inserted) {
      cands.push_back({doc, 0.0});
      field_scores.resize(field_scores.size() + nf, 0.0);
    }
    return it->second;
  };

  for (size_t fi = 0; fi < nf; ++fi) {
    const FieldIndex& f = *fields[fi];
    TermList analyzed = analyzer_.Analyze(q.text, f.spec().analyzer);
    if (analyzed.empty()) continue;

    if (q.similarity == Similarity::kBm25) {
      for (const auto& term : UniqueTerms(analyzed)) {
        const auto* list = f.postings(term);
        if (!list) continue;
        double idf = f.Bm25Idf(list->size());
        for (const auto& p : *list) {
          uint32_t s = slot_of(p.doc);
          field_scores[s * nf + fi] +=
              Bm25TermScore(bm25_, idf, p.tf, f.doc_length(p.doc), f.avgdl());
        }
      }
    } else {
      std::map<std::string, uint32_t> qtf;
      for (const auto& t : analyzed) ++qtf[t];
      double qnorm_sq = 0;
      for (const auto& [term, count] : qtf) {
        double qw = count * f.CosineIdf(f.df(term));
        qnorm_sq += qw * qw;
      }
      double qnorm = std::sqrt(qnorm_sq);
      if (qnorm == 0) continue;
      std::unordered_map<uint32_t, double> dots;
      for (const auto& [term, count] : qtf) {
        const auto* list = f.postings(term);
        if (!list) continue;
        double idf = f.CosineIdf(list->size());
        double qw = count * idf;
        for (const auto& p : *list) dots[p.doc] += qw * (p.tf * idf);
      }
      for (const auto& [doc, dot] : dots) {
        double denom = qnorm * f.cosine_norm(doc);
        if (denom > 0) field_scores[slot_of(doc) * nf + fi] = dot / denom;
      }
    }
  }

  for (size_t s = 0; s < cands.size(); ++s) {
    double total = 0;
    for (size_t fi = 0; fi < nf; ++fi) total += q.fields[fi].boost * field_scores[s * nf + fi];
    cands[s].total = total;
  }
  std::vector<uint32_t> order;
  order.reserve(cands.size());
  for (uint32_t s = 0; s < cands.size(); ++s) {
    if (cands[s].total > 0) order.push_back(s);
  }
  auto better = [&](uint32_t a, uint32_t b) {
    if (cands[a].total != cands[b].total) return cands[a].total > cands[b].total;
    return cands[a].doc < cands[b].doc;
  };
  size_t keep = std::min(q.top_n, order.size());
  std::partial_sort(order.begin(), order.begin() + keep, order.end(), better);
  order.resize(keep);

  std::vector<Hit> hits;
  hits.reserve(keep);
  for (uint32_t s : order) {
    Hit h;
    h.doc = cands[s].doc;
    h.passage_id = passages_[h.doc].passage_id;
    h.score = cands[s].total;
    for (size_t fi = 0; fi < nf; ++fi) {
      h.breakdown.push_back({q.fields[fi].field, q.fields[fi].boost, field_scores[s * nf + fi]});
    }
    hits.push_back(std::move(h));
  }
  return hits;
}

}  // namespace bgqa
