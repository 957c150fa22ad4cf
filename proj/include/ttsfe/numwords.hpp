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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ttsfe {

// American English number reading, one word per vector element, all
// lowercase ("42" -> {"forty", "two"}). Values above kMaxSpelled are read
// digit by digit elsewhere.
inline constexpr std::uint64_t kMaxSpelled = 999'999'999ull;

std::vector<std::string> cardinal_words(std::uint64_t value);

// "first", "twenty second", ... over the same range.
std::vector<std::string> ordinal_words(std::uint64_t value);

// Denominator reading for fractions: 2 -> half/halves, otherwise the
// ordinal with an "s" appended when plural ("eighths").
std::vector<std::string> denominator_words(std::uint64_t value, bool plural);

// One word per digit character: "07" -> {"zero", "seven"}.
std::vector<std::string> digit_words(std::string_view digits);

// Year reading, e.g. 1984 -> "nineteen eighty four", 2023 -> "twenty
// twenty three", 1905 -> "nineteen oh five", 1900 -> "nineteen hundred".
std::vector<std::string> year_words(int year);

bool all_ascii_digits(std::string_view s);

// Parses a short digit string; callers guarantee all_ascii_digits.
std::uint64_t parse_digits(std::string_view s);

}  // namespace ttsfe
