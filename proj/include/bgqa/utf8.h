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

#ifndef BGQA_UTF8_H_
#define BGQA_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bgqa::utf8 {

// Decodes one code point starting at text[pos] and advances pos. Invalid
// sequences decode to U+FFFD and consume a single byte.
char32_t Next(std::string_view text, size_t& pos);

void Append(std::string& out, char32_t cp);

// Number of code points in text.
size_t Length(std::string_view text);

// Byte offset of every code point, plus a final entry equal to text.size().
std::vector<size_t> Offsets(std::string_view text);

std::string Lower(std::string_view text);

// Letters, digits and combining marks. Everything else separates words.
bool IsWordChar(char32_t cp);

bool IsSpace(char32_t cp);

}  // namespace bgqa::utf8

#endif  // BGQA_UTF8_H_
