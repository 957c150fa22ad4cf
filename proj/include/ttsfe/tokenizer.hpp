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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ttsfe/unicode.hpp"

namespace ttsfe {

// One normalization token: a run of characters sharing a major unicode
// category, inside a single whitespace-delimited word. Offsets count
// unicode scalar values into the source text, half-open [start, end).
struct Token {
  std::string text;
  int start = 0;
  int end = 0;
  int word_index = 0;
  CharClass uclass = CharClass::Other;
};

struct TokenSequence {
  std::vector<Token> tokens;
  std::string source;

  int n() const { return static_cast<int>(tokens.size()); }
  bool empty() const { return tokens.empty(); }
};

// Splits on whitespace runs, then at every major unicode category change.
// Total over all inputs; the empty string yields an empty sequence.
TokenSequence tokenize(std::string_view text);

// 1 + max word_index, or 0 for the empty sequence.
int word_count(const TokenSequence& seq);

// Token indices grouped by word, in word order. Each group is a contiguous,
// increasing run of indices.
std::vector<std::vector<int>> word_groups(const TokenSequence& seq);

}  // namespace ttsfe
