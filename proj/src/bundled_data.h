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

#ifndef BGQA_BUNDLED_DATA_H_
#define BGQA_BUNDLED_DATA_H_

#include <string_view>

namespace bgqa::bundled {

extern const std::string_view kBulgarianStopwords;
extern const std::string_view kBulgarianStemmerRules;

}  // namespace bgqa::bundled

#endif  // BGQA_BUNDLED_DATA_H_
