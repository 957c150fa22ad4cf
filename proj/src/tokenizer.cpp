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

#include "ttsfe/tokenizer.hpp"

namespace ttsfe {

TokenSequence tokenize(std::string_view text) {
  TokenSequence seq;
  seq.source = std::string(text);
  const auto cps = decode_utf8(text);

  int word = -1;
  bool in_word = false;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_space(cps[i])) {
      in_word = false;
      ++i;
      continue;
    }
    if (!in_word) {
      ++word;
      in_word = true;
    }
    const CharClass cls = char_class(cps[i]);
    std::size_t j = i + 1;
    while (j < cps.size() && !is_space(cps[j]) && char_class(cps[j]) == cls) ++j;

    Token tok;
    tok.start = static_cast<int>(i);
    tok.end = static_cast<int>(j);
    tok.word_index = word;
    tok.uclass = cls;
    for (std::size_t k = i; k < j; ++k) tok.text += encode_utf8(cps[k]);
    seq.tokens.push_back(std::move(tok));
    i = j;
  }
  return seq;
}

int word_count(const TokenSequence& seq) {
  if (seq.tokens.empty()) return 0;
  return seq.tokens.back().word_index + 1;
}

std::vector<std::vector<int>> word_groups(const TokenSequence& seq) {
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(word_count(seq)));
  for (int i = 0; i < seq.n(); ++i) {
    groups[static_cast<std::size_t>(seq.tokens[static_cast<std::size_t>(i)].word_index)]
        .push_back(i);
  }
  return groups;
}

}  // namespace ttsfe
