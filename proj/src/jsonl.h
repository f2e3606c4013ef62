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

#ifndef BGQA_JSONL_H_
#define BGQA_JSONL_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace bgqa::io {

// Whole-file read; throws DataError if the file cannot be opened.
std::string ReadFile(const std::filesystem::path& path);

// Writes atomically enough for our purposes: truncate then write. Throws
// DataError on failure.
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// Calls fn(line_number, json) for every non-blank line. Parse failures throw
// DataError naming the file and line.
void ForEachJsonLine(
    const std::filesystem::path& path,
    const std::function<void(size_t, const nlohmann::json&)>& fn);

// Compact, key-sorted, UTF-8 preserving dump used for every machine-readable
// output so reports are byte-stable.
std::string Dump(const nlohmann::json& j);

}  // namespace bgqa::io

#endif  // BGQA_JSONL_H_
