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

#ifndef BGQA_CHUNKER_H_
#define BGQA_CHUNKER_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace bgqa {

// Plain-text source document. Markup is expected to be stripped upstream.
struct Article {
  std::string doc_id;
  std::string title;
  std::string body;
};

// A retrievable piece of an article. Spans are in code points of the
// article body, half-open.
struct Passage {
  std::string passage_id;
  std::string doc_id;
  std::string title;
  std::string text;
  size_t start_char = 0;
  size_t end_char = 0;

  bool operator==(const Passage&) const = default;
};

struct ChunkPolicy {
  enum class Mode { kWindow, kParagraph };

  Mode mode = Mode::kParagraph;
  size_t window_chars = 0;  // window mode only

  size_t stride_chars() const { return window_chars / 4; }

  static ChunkPolicy Window(size_t k);
  static ChunkPolicy Paragraph() { return {}; }
  static ChunkPolicy SmallWindow() { return Window(400); }
  static ChunkPolicy LargeWindow() { return Window(1600); }

  // "paragraph" or "window:K". Throws UsageError.
  static ChunkPolicy Parse(std::string_view spec);
  std::string ToString() const;

  // Throws UsageError unless window mode has K >= 4 and K % 4 == 0.
  void Validate() const;
};

// Windows of K characters starting every K/4 characters; the last window is
// clipped to the end of the body. Empty body yields nothing.
std::vector<Passage> WindowChunks(const Article& a, const ChunkPolicy& policy);

// Splits on maximal runs of '\n'; whitespace-only pieces are dropped.
std::vector<Passage> ParagraphChunks(const Article& a);

std::vector<Passage> Chunk(const Article& a, const ChunkPolicy& policy);

// "<doc_id>#<ordinal>" with a zero-padded ordinal, so lexical order of ids
// follows chunk order within a document.
std::string MakePassageId(std::string_view doc_id, size_t ordinal);

// Reads the corpus file: one {doc_id, title, text} object per line.
void ForEachArticle(const std::filesystem::path& corpus,
                    const std::function<void(Article)>& fn);
std::vector<Article> LoadCorpus(const std::filesystem::path& corpus);

}  // namespace bgqa

#endif  // BGQA_CHUNKER_H_
