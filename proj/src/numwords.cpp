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

#include "ttsfe/numwords.hpp"

#include <array>
#include <cassert>

namespace ttsfe {

namespace {

constexpr std::array<const char*, 20> kUnits = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};

constexpr std::array<const char*, 10> kTens = {
    "",      "",      "twenty",  "thirty", "forty",
    "fifty", "sixty", "seventy", "eighty", "ninety"};

void append_below_thousand(std::uint64_t v, std::vector<std::string>& out) {
  assert(v < 1000);
  if (v >= 100) {
    out.emplace_back(kUnits[v / 100]);
    out.emplace_back("hundred");
    v %= 100;
    if (v == 0) return;
  }
  if (v >= 20) {
    out.emplace_back(kTens[v / 10]);
    v %= 10;
    if (v == 0) return;
    out.emplace_back(kUnits[v]);
  } else {
    out.emplace_back(kUnits[v]);
  }
}

// "one" -> "first" etc.; regular words get "th" with the usual spelling
// adjustments (y->ieth, e-drop for nine is not one of them).
std::string ordinalize(const std::string& word) {
  if (word == "one") return "first";
  if (word == "two") return "second";
  if (word == "three") return "third";
  if (word == "five") return "fifth";
  if (word == "eight") return "eighth";
  if (word == "nine") return "ninth";
  if (word == "twelve") return "twelfth";
  if (!word.empty() && word.back() == 'y')
    return word.substr(0, word.size() - 1) + "ieth";
  return word + "th";
}

}  // namespace

std::vector<std::string> cardinal_words(std::uint64_t value) {
  assert(value <= kMaxSpelled);
  std::vector<std::string> out;
  if (value == 0) {
    out.emplace_back("zero");
    return out;
  }
  const std::uint64_t millions = value / 1'000'000;
  const std::uint64_t thousands = (value / 1000) % 1000;
  const std::uint64_t rest = value % 1000;
  if (millions > 0) {
    append_below_thousand(millions, out);
    out.emplace_back("million");
  }
  if (thousands > 0) {
    append_below_thousand(thousands, out);
    out.emplace_back("thousand");
  }
  if (rest > 0) append_below_thousand(rest, out);
  return out;
}

std::vector<std::string> ordinal_words(std::uint64_t value) {
  std::vector<std::string> words = cardinal_words(value);
  words.back() = ordinalize(words.back());
  return words;
}

std::vector<std::string> denominator_words(std::uint64_t value, bool plural) {
  if (value == 2) return {plural ? "halves" : "half"};
  std::vector<std::string> words = ordinal_words(value);
  if (plural) words.back() += "s";
  return words;
}

std::vector<std::string> digit_words(std::string_view digits) {
  std::vector<std::string> out;
  out.reserve(digits.size());
  for (char c : digits) {
    assert(c >= '0' && c <= '9');
    out.emplace_back(kUnits[static_cast<std::size_t>(c - '0')]);
  }
  return out;
}

std::vector<std::string> year_words(int year) {
  assert(year >= 1000 && year <= 9999);
  const int h = year / 100;
  const int r = year % 100;
  std::vector<std::string> out;
  if (r == 0) {
    if (h % 10 == 0) return cardinal_words(static_cast<std::uint64_t>(year));
    out = cardinal_words(static_cast<std::uint64_t>(h));
    out.emplace_back("hundred");
    return out;
  }
  if (r < 10 && h % 10 == 0) {
    // 2005 -> "two thousand five"
    out = cardinal_words(static_cast<std::uint64_t>(h) * 100);
    auto tail = cardinal_words(static_cast<std::uint64_t>(r));
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
  }
  out = cardinal_words(static_cast<std::uint64_t>(h));
  if (r < 10) out.emplace_back("oh");
  auto tail = cardinal_words(static_cast<std::uint64_t>(r));
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

bool all_ascii_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::uint64_t parse_digits(std::string_view s) {
  std::uint64_t v = 0;
  for (char c : s) v = v * 10 + static_cast<std::uint64_t>(c - '0');
  return v;
}

}  // namespace ttsfe
