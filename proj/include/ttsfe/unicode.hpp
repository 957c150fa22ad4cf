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

// Major unicode category buckets used by the tokenizer: L* -> Letter,
// N* -> Digit, P* -> Punct, S* -> Symbol, White_Space -> Space, everything
// else -> Other. Classification is per code point.
enum class CharClass : std::uint8_t { Letter, Digit, Punct, Symbol, Other, Space };

const char* to_string(CharClass c);

CharClass char_class(char32_t cp);
bool is_space(char32_t cp);

// Lenient UTF-8 decoding: malformed bytes decode to U+FFFD one byte at a
// time so offsets stay aligned with the input.
std::vector<char32_t> decode_utf8(std::string_view text);
std::string encode_utf8(const std::vector<char32_t>& cps);
std::string encode_utf8(char32_t cp);

// Number of unicode scalar values in `text`.
std::size_t scalar_length(std::string_view text);

// Slice by scalar-value offsets [start, end); clamps to the text length.
std::string slice_scalars(std::string_view text, std::size_t start, std::size_t end);

std::string ascii_lower(std::string_view s);

}  // namespace ttsfe
