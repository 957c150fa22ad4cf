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

#include "ttsfe/contextual.hpp"

namespace ttsfe {

std::vector<Subword> whitespace_punct_subwords(const std::string& text) {
  const std::vector<char32_t> cps = decode_utf8(text);
  std::vector<Subword> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    const CharClass cls = char_class(cps[i]);
    if (cls == CharClass::Space) {
      ++i;
      continue;
    }
    if (cls == CharClass::Punct) {
      out.push_back({encode_utf8(cps[i]), i, i + 1});
      ++i;
      continue;
    }
    std::size_t j = i;
    std::string word;
    while (j < cps.size()) {
      const CharClass c = char_class(cps[j]);
      if (c == CharClass::Space || c == CharClass::Punct) break;
      word += encode_utf8(cps[j]);
      ++j;
    }
    out.push_back({std::move(word), i, j});
    i = j;
  }
  return out;
}

}  // namespace ttsfe
