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

#ifndef BGQA_TESTS_FIXTURES_H_
#define BGQA_TESTS_FIXTURES_H_

#include <filesystem>
#include <vector>

#include "bgqa/chunker.h"
#include "bgqa/dataset.h"
#include "bgqa/index.h"

namespace bgqa::fixtures {

inline std::filesystem::path DataDir() { return BGQA_TEST_DATA; }

// Ten articles of five paragraphs each.
inline std::vector<Passage> PlantedPassages() {
  std::vector<Passage> out;
  for (const Article& a : LoadCorpus(DataDir() / "planted_corpus.jsonl")) {
    for (auto& p : ParagraphChunks(a)) out.push_back(std::move(p));
  }
  return out;
}

// Each gold option occurs verbatim in exactly one passage; the other options
// occur nowhere in the corpus.
inline Dataset PlantedQuestions() { return LoadDataset(DataDir() / "planted_questions.jsonl"); }

inline Index PlantedIndex(std::vector<Passage> passages = PlantedPassages()) {
  return Index::Build(std::move(passages), FieldSpec::All(), Analyzer::Bulgarian());
}

}  // namespace bgqa::fixtures

#endif  // BGQA_TESTS_FIXTURES_H_
