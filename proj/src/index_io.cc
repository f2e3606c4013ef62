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

// On-disk index format, version 1.
//
//   manifest.json     format name/version, passage count, field list
//   passages.jsonl    passage store, one record per line, ascending id
//   stopwords.txt     stop words used at build time
//   stemmer.rules     suffix rules used at build time (absent: identity)
//   field.<name>.bin  per-field postings, little-endian:
//       "BGQAFLD\0" u32 version u32 num_docs u32 doc_len[num_docs]
//       u32 num_terms { u32 len, bytes, u32 df, {u32 doc, u32 tf}[df] }*
//       u64 FNV-1a of every preceding byte

#include <cstring>
#include <fstream>

#include "bgqa/error.h"
#include "bgqa/index.h"
#include "jsonl.h"

namespace bgqa {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kMagic[8] = {'B', 'G', 'Q', 'A', 'F', 'L', 'D', '\0'};
constexpr std::string_view kFormatName = "bgqa-index";

uint64_t Fnv1a(std::string_view data) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

class Writer {
 public:
  void U32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void Bytes(std::string_view s) { buf_.append(s); }
  std::string& buffer() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string_view data, std::string name) : data_(data), name_(std::move(name)) {}

  uint32_t U32() {
    Need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  uint64_t U64() {
    Need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::string_view Bytes(size_t n) {
    Need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  size_t pos() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }

  [[noreturn]] void Fail(const std::string& what) const {
    throw IndexCorruptError(name_ + ": " + what + " (format version " +
                            std::to_string(Index::kFormatVersion) + ")");
  }

 private:
  void Need(size_t n) const {
    if (data_.size() - pos_ < n) Fail("truncated at byte " + std::to_string(pos_));
  }

  std::string_view data_;
  size_t pos_ = 0;
  std::string name_;
};

std::string FieldFileName(const std::string& field) { return "field." + field + ".bin"; }

std::string EncodeField(const FieldIndex& f) {
  Writer w;
  w.Bytes(std::string_view(kMagic, sizeof(kMagic)));
  w.U32(Index::kFormatVersion);
  w.U32(static_cast<uint32_t>(f.num_docs()));
  for (uint32_t dl : f.doc_lengths()) w.U32(dl);
  w.U32(static_cast<uint32_t>(f.num_terms()));
  for (size_t t = 0; t < f.num_terms(); ++t) {
    const std::string& term = f.term(t);
    w.U32(static_cast<uint32_t>(term.size()));
    w.Bytes(term);
    const auto& list = f.postings_at(t);
    w.U32(static_cast<uint32_t>(list.size()));
    for (const auto& p : list) {
      w.U32(p.doc);
      w.U32(p.tf);
    }
  }
  uint64_t sum = Fnv1a(w.buffer());
  w.U64(sum);
  return std::move(w.buffer());
}

FieldIndex DecodeField(const FieldSpec& spec, std::string_view data,
                       const std::string& name, size_t expected_docs) {
  Reader r(data, name);
  if (data.size() < 8) r.Fail("truncated header");
  uint64_t stored_sum = 0;
  {
    Reader tail(data.substr(data.size() - 8), name);
    stored_sum = tail.U64();
  }
  if (std::memcmp(r.Bytes(sizeof(kMagic)).data(), kMagic, sizeof(kMagic)) != 0) {
    r.Fail("bad magic");
  }
  uint32_t version = r.U32();
  if (static_cast<int>(version) != Index::kFormatVersion) {
    throw IndexVersionError(static_cast<int>(version), Index::kFormatVersion);
  }
  if (Fnv1a(data.substr(0, data.size() - 8)) != stored_sum) r.Fail("checksum mismatch");

  uint32_t num_docs = r.U32();
  if (num_docs != expected_docs) r.Fail("document count disagrees with manifest");
  std::vector<uint32_t> lengths(num_docs);
  for (auto& dl : lengths) dl = r.U32();
  uint32_t num_terms = r.U32();
  std::vector<std::string> terms;
  std::vector<std::vector<FieldIndex::Posting>> postings;
  terms.reserve(num_terms);
  postings.reserve(num_terms);
  for (uint32_t t = 0; t < num_terms; ++t) {
    uint32_t len = r.U32();
    std::string term(r.Bytes(len));
    if (!terms.empty() && !(terms.back() < term)) r.Fail("terms out of order");
    uint32_t df = r.U32();
    if (df == 0 || static_cast<uint64_t>(df) * 8 > r.remaining()) r.Fail("bad document frequency");
    std::vector<FieldIndex::Posting> list(df);
    for (uint32_t i = 0; i < df; ++i) {
      list[i].doc = r.U32();
      list[i].tf = r.U32();
      if (list[i].doc >= num_docs || list[i].tf == 0) r.Fail("posting out of range");
      if (i > 0 && list[i].doc <= list[i - 1].doc) r.Fail("postings out of order");
    }
    terms.push_back(std::move(term));
    postings.push_back(std::move(list));
  }
  if (r.remaining() != 8) r.Fail("trailing bytes");
  return FieldIndex(spec, std::move(terms), std::move(postings), std::move(lengths));
}

json PassageJson(const Passage& p) {
  return json{{"passage_id", p.passage_id}, {"doc_id", p.doc_id},
              {"title", p.title},           {"text", p.text},
              {"start_char", p.start_char}, {"end_char", p.end_char}};
}

}  // namespace

void Index::Save(const fs::path& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create index directory " + dir.string() + ": " + ec.message());

  std::string store;
  for (const auto& p : passages_) {
    store += io::Dump(PassageJson(p));
    store += '\n';
  }
  io::WriteFile(dir / "passages.jsonl", store);
  io::WriteFile(dir / "stopwords.txt", analyzer_.stopwords().Serialize());

  std::string stemmer_kind;
  if (auto* rules = dynamic_cast<const SuffixStemmer*>(&analyzer_.stemmer())) {
    stemmer_kind = "suffix-rules";
    io::WriteFile(dir / "stemmer.rules", rules->rules_text());
  } else if (dynamic_cast<const IdentityStemmer*>(&analyzer_.stemmer())) {
    stemmer_kind = "identity";
    fs::remove(dir / "stemmer.rules", ec);
  } else {
    throw UsageError("only suffix-rule and identity stemmers can be saved");
  }

  json fields = json::array();
  for (const auto& f : fields_) {
    std::string file = FieldFileName(f.spec().name);
    io::WriteFile(dir / file, EncodeField(f));
    fields.push_back({{"name", f.spec().name}, {"file", file}, {"num_terms", f.num_terms()}});
  }
  json manifest{{"format", kFormatName},
                {"format_version", kFormatVersion},
                {"num_passages", passages_.size()},
                {"fields", fields},
                {"stemmer", stemmer_kind},
                {"stopwords_source", analyzer_.stopwords().source()},
                {"bm25", {{"k1", bm25_.k1}, {"b", bm25_.b}}}};
  // Manifest last: a directory without one is never mistaken for an index.
  io::WriteFile(dir / "manifest.json", manifest.dump(2) + "\n");
}

Index Index::Load(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw DataError("no index at " + dir.string() + " (manifest.json missing)");
  }
  json manifest;
  try {
    manifest = json::parse(io::ReadFile(manifest_path));
  } catch (const json::parse_error& e) {
    throw IndexCorruptError(manifest_path.string() + ": " + e.what());
  }
  try {
    if (manifest.at("format").get<std::string>() != kFormatName) {
      throw IndexCorruptError(manifest_path.string() + ": not a bgqa index");
    }
    int version = manifest.at("format_version").get<int>();
    if (version != kFormatVersion) throw IndexVersionError(version, kFormatVersion);

    size_t n = manifest.at("num_passages").get<size_t>();
    std::vector<Passage> passages;
    passages.reserve(n);
    io::ForEachJsonLine(dir / "passages.jsonl", [&](size_t, const json& j) {
      Passage p;
      p.passage_id = j.at("passage_id").get<std::string>();
      p.doc_id = j.at("doc_id").get<std::string>();
      p.title = j.at("title").get<std::string>();
      p.text = j.at("text").get<std::string>();
      p.start_char = j.at("start_char").get<size_t>();
      p.end_char = j.at("end_char").get<size_t>();
      passages.push_back(std::move(p));
    });
    if (passages.size() != n) {
      throw IndexCorruptError("passage store has " + std::to_string(passages.size()) +
                              " records, manifest says " + std::to_string(n));
    }
    for (size_t i = 1; i < passages.size(); ++i) {
      if (!(passages[i - 1].passage_id < passages[i].passage_id)) {
        throw IndexCorruptError("passage store is not sorted by passage_id");
      }
    }

    auto stops = StopWordList::FromFile(dir / "stopwords.txt");
    std::shared_ptr<const Stemmer> stemmer;
    std::string stemmer_kind = manifest.at("stemmer").get<std::string>();
    if (stemmer_kind == "suffix-rules") {
      stemmer = std::make_shared<SuffixStemmer>(SuffixStemmer::FromFile(dir / "stemmer.rules"));
    } else if (stemmer_kind == "identity") {
      stemmer = std::make_shared<IdentityStemmer>();
    } else {
      throw IndexCorruptError("unknown stemmer kind '" + stemmer_kind + "'");
    }

    std::vector<FieldIndex> fields;
    for (const auto& f : manifest.at("fields")) {
      FieldSpec spec = FieldSpec::ByName(f.at("name").get<std::string>());
      fs::path file = dir / f.at("file").get<std::string>();
      std::string data = io::ReadFile(file);
      fields.push_back(DecodeField(spec, data, file.string(), n));
    }
    Index index(std::move(passages), std::move(fields),
                Analyzer(std::move(stops), std::move(stemmer)));
    index.bm25_.k1 = manifest.at("bm25").at("k1").get<double>();
    index.bm25_.b = manifest.at("bm25").at("b").get<double>();
    return index;
  } catch (const json::exception& e) {
    throw IndexCorruptError(dir.string() + ": malformed index metadata: " + e.what());
  } catch (const UsageError& e) {
    throw IndexCorruptError(dir.string() + ": " + e.what());
  }
}

}  // namespace bgqa
