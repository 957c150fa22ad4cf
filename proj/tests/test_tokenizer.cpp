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

#include <doctest.h>

#include <string>
#include <vector>

#include "ttsfe/common.hpp"
#include "ttsfe/metrics.hpp"
#include "ttsfe/tokenizer.hpp"
#include "ttsfe/unicode.hpp"

using namespace ttsfe;

namespace {

std::vector<std::string> texts(const TokenSequence& seq) {
  std::vector<std::string> out;
  for (const auto& t : seq.tokens) out.push_back(t.text);
  return out;
}

std::vector<int> word_indices(const TokenSequence& seq) {
  std::vector<int> out;
  for (const auto& t : seq.tokens) out.push_back(t.word_index);
  return out;
}

// Joins tokens grouped by word with single spaces between words.
std::string rejoin(const TokenSequence& seq) {
  std::string out;
  int prev_word = -1;
  for (const auto& t : seq.tokens) {
    if (t.word_index != prev_word && prev_word >= 0) out += ' ';
    out += t.text;
    prev_word = t.word_index;
  }
  return out;
}

std::string random_ascii_line(Rng& rng) {
  static const std::string alphabet =
      "abcXYZ019 .,'-/$%:#\t @";
  const int len = rng.uniform_int(0, 40);
  std::string s;
  for (int i = 0; i < len; ++i)
    s += alphabet[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(alphabet.size()) - 1))];
  return s;
}

std::string random_unicode_line(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "a", "Z", "7", ".", "$", " ", "é", "½", "€", "世",
      "界", " ", "—", "α", "\U0001F600", "　", "'"};
  const int len = rng.uniform_int(0, 24);
  std::string s;
  for (int i = 0; i < len; ++i)
    s += pieces[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(pieces.size()) - 1))];
  return s;
}

}  // namespace

TEST_CASE("tokenize splits on unicode class changes") {
  const auto seq = tokenize("1/2023");
  CHECK(texts(seq) == std::vector<std::string>{"1", "/", "2023"});
  REQUIRE(seq.n() == 3);
  CHECK(seq.tokens[0].uclass == CharClass::Digit);
  CHECK(seq.tokens[1].uclass == CharClass::Punct);
  CHECK(seq.tokens[2].uclass == CharClass::Digit);
  CHECK(word_indices(seq) == std::vector<int>{0, 0, 0});
  CHECK(seq.tokens[0].start == 0);
  CHECK(seq.tokens[0].end == 1);
  CHECK(seq.tokens[2].start == 2);
  CHECK(seq.tokens[2].end == 6);
}

TEST_CASE("tokenize of the empty string is empty") {
  const auto seq = tokenize("");
  CHECK(seq.n() == 0);
  CHECK(seq.empty());
  CHECK(word_count(seq) == 0);
  CHECK(tokenize("   \t\n").n() == 0);
}

TEST_CASE("tokenize handles abbreviations and apostrophes") {
  const auto seq = tokenize("St. Mary's St.");
  CHECK(texts(seq) ==
        std::vector<std::string>{"St", ".", "Mary", "'", "s", "St", "."});
  CHECK(word_indices(seq) == std::vector<int>{0, 0, 1, 1, 1, 2, 2});
  CHECK(word_count(seq) == 3);
}

TEST_CASE("word_count counts whitespace-separated words") {
  CHECK(word_count(tokenize("hello world")) == 2);
  CHECK(word_count(tokenize("one")) == 1);
  CHECK(word_count(tokenize("  a  b\t c ")) == 3);
}

TEST_CASE("word_groups collects token indices per word") {
  const auto seq = tokenize("St. Mary's St.");
  const auto groups = word_groups(seq);
  REQUIRE(groups.size() == 3);
  CHECK(groups[0] == std::vector<int>{0, 1});
  CHECK(groups[1] == std::vector<int>{2, 3, 4});
  CHECK(groups[2] == std::vector<int>{5, 6});
}

TEST_CASE("token spans slice the source exactly") {
  const auto check_spans = [](const std::string& text) {
    const auto seq = tokenize(text);
    int prev_end = -1;
    for (const auto& t : seq.tokens) {
      CHECK(t.start >= 0);
      CHECK(t.start < t.end);
      CHECK(t.start >= prev_end);
      CHECK(slice_scalars(text, t.start, t.end) == t.text);
      prev_end = t.end;
    }
  };
  check_spans("St. Mary's St.");
  check_spans("café €5 世界");
  check_spans("a b c");
}

TEST_CASE("tokens never mix unicode classes") {
  Rng rng(41);
  for (int iter = 0; iter < 300; ++iter) {
    const std::string line = random_unicode_line(rng);
    for (const auto& t : tokenize(line).tokens) {
      for (char32_t cp : decode_utf8(t.text)) {
        CHECK(char_class(cp) == t.uclass);
        CHECK_FALSE(is_space(cp));
      }
    }
  }
}

TEST_CASE("word-grouped rejoin reconstructs whitespace-collapsed source") {
  Rng rng(42);
  for (int iter = 0; iter < 500; ++iter) {
    const std::string line = random_ascii_line(rng);
    CHECK(rejoin(tokenize(line)) == normalize_whitespace(line));
  }
}

TEST_CASE("word index increments exactly at whitespace runs") {
  const auto seq = tokenize("ab \t cd e");
  CHECK(word_indices(seq) == std::vector<int>{0, 1, 2});
  Rng rng(43);
  for (int iter = 0; iter < 200; ++iter) {
    const auto s = tokenize(random_unicode_line(rng));
    int prev = -1;
    for (const auto& t : s.tokens) {
      CHECK(t.word_index >= prev);
      CHECK(t.word_index <= prev + 1);
      prev = t.word_index;
    }
    if (!s.tokens.empty()) CHECK(s.tokens.front().word_index == 0);
  }
}

TEST_CASE("tokenize classifies non-ASCII characters") {
  const auto euro = tokenize("€5");
  REQUIRE(euro.n() == 2);
  CHECK(euro.tokens[0].uclass == CharClass::Symbol);
  CHECK(euro.tokens[1].uclass == CharClass::Digit);

  const auto cafe = tokenize("café");
  REQUIRE(cafe.n() == 1);
  CHECK(cafe.tokens[0].uclass == CharClass::Letter);

  const auto dash = tokenize("a—b");
  REQUIRE(dash.n() == 3);
  CHECK(dash.tokens[1].uclass == CharClass::Punct);
}

TEST_CASE("tokenize is deterministic") {
  const std::string line = "Dr. Foo paid $12.50 on 3/4/2021";
  const auto a = tokenize(line);
  const auto b = tokenize(line);
  REQUIRE(a.n() == b.n());
  for (int i = 0; i < a.n(); ++i) {
    const auto& ta = a.tokens[static_cast<std::size_t>(i)];
    const auto& tb = b.tokens[static_cast<std::size_t>(i)];
    CHECK(ta.text == tb.text);
    CHECK(ta.start == tb.start);
    CHECK(ta.end == tb.end);
    CHECK(ta.word_index == tb.word_index);
    CHECK(ta.uclass == tb.uclass);
  }
}
