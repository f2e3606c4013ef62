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

#include "bgqa/chunker.h"

#include <charconv>
#include <cstdio>

#include "bgqa/error.h"
#include "bgqa/utf8.h"
#include "jsonl.h"

namespace bgqa {

ChunkPolicy ChunkPolicy::Window(size_t k) {
  ChunkPolicy p;
  p.mode = Mode::kWindow;
  p.window_chars = k;
  p.Validate();
  return p;
}

ChunkPolicy ChunkPolicy::Parse(std::string_view spec) {
  if (spec == "paragraph") return Paragraph();
  constexpr std::string_view kPrefix = "window:";
  if (spec.substr(0, kPrefix.size()) == kPrefix) {
    std::string_view num = spec.substr(kPrefix.size());
    size_t k = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty()) {
      throw UsageError("bad window size in chunk policy '" + std::string(spec) + "'");
    }
    return Window(k);
  }
  throw UsageError("chunk policy must be 'paragraph' or 'window:K', got '" +
                   std::string(spec) + "'");
}

std::string ChunkPolicy::ToString() const {
  if (mode == Mode::kParagraph) return "paragraph";
  return "window:" + std::to_string(window_chars);
}

void ChunkPolicy::Validate() const {
  if (mode != Mode::kWindow) return;
  if (window_chars < 4 || window_chars % 4 != 0) {
    throw UsageError("window size must be >= 4 and divisible by 4, got " +
                     std::to_string(window_chars));
  }
}

std::string MakePassageId(std::string_view doc_id, size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "#%05zu", ordinal);
  return std::string(doc_id) + buf;
}

std::vector<Passage> WindowChunks(const Article& a, const ChunkPolicy& policy) {
  if (policy.mode != ChunkPolicy::Mode::kWindow) {
    throw UsageError("WindowChunks needs a window policy");
  }
  policy.Validate();
  std::vector<Passage> out;
  const auto offsets = utf8::Offsets(a.body);
  const size_t len = offsets.size() - 1;
  if (len == 0) return out;
  const size_t k = policy.window_chars;
  const size_t stride = policy.stride_chars();

  auto emit = [&](size_t start, size_t end) {
    Passage p;
    p.passage_id = MakePassageId(a.doc_id, out.size());
    p.doc_id = a.doc_id;
    p.title = a.title;
    p.text = a.body.substr(offsets[start], offsets[end] - offsets[start]);
    p.start_char = start;
    p.end_char = end;
    out.push_back(std::move(p));
  };
  size_t start = 0;
  while (start + k < len) {
    emit(start, start + k);
    start += stride;
  }
  emit(start, len);
  return out;
}

std::vector<Passage> ParagraphChunks(const Article& a) {
  std::vector<Passage> out;
  const std::string& body = a.body;
  size_t byte = 0;
  size_t chars = 0;  // code points consumed before `byte`
  while (byte < body.size()) {
    size_t nl = body.find('\n', byte);
    if (nl == std::string::npos) nl = body.size();
    std::string_view seg(body.data() + byte, nl - byte);
    size_t seg_chars = utf8::Length(seg);
    bool blank = true;
    for (size_t pos = 0; pos < seg.size() && blank;) {
      blank = utf8::IsSpace(utf8::Next(seg, pos));
    }
    if (!blank) {
      Passage p;
      p.passage_id = MakePassageId(a.doc_id, out.size());
      p.doc_id = a.doc_id;
      p.title = a.title;
      p.text = std::string(seg);
      p.start_char = chars;
      p.end_char = chars + seg_chars;
      out.push_back(std::move(p));
    }
    chars += seg_chars;
    byte = nl;
    while (byte < body.size() && body[byte] == '\n') {
      ++byte;
      ++chars;
    }
  }
  return out;
}

std::vector<Passage> Chunk(const Article& a, const ChunkPolicy& policy) {
  return policy.mode == ChunkPolicy::Mode::kWindow ? WindowChunks(a, policy)
                                                   : ParagraphChunks(a);
}

void ForEachArticle(const std::filesystem::path& corpus,
                    const std::function<void(Article)>& fn) {
  io::ForEachJsonLine(corpus, [&](size_t lineno, const nlohmann::json& j) {
    auto where = corpus.string() + ":" + std::to_string(lineno);
    if (!j.is_object()) throw DataError(where + ": record is not an object");
    Article a;
    for (auto [key, dest] : {std::pair{"doc_id", &a.doc_id},
                             std::pair{"title", &a.title},
                             std::pair{"text", &a.body}}) {
      auto it = j.find(key);
      if (it == j.end() || !it->is_string()) {
        throw DataError(where + ": field '" + key + "' missing or not a string");
      }
      *dest = it->get<std::string>();
    }
    fn(std::move(a));
  });
}

std::vector<Article> LoadCorpus(const std::filesystem::path& corpus) {
  std::vector<Article> out;
  ForEachArticle(corpus, [&](Article a) { out.push_back(std::move(a)); });
  return out;
}

}  // namespace bgqa
