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

#include "ttsfe/unicode.hpp"

#include <algorithm>
#include <array>

namespace ttsfe {

namespace {

struct Range {
  char32_t lo;
  char32_t hi;
  CharClass cls;
};

// ASCII is exact. Beyond ASCII the table covers the common blocks; code
// points outside any listed range fall back to Other.
constexpr std::array<Range, 77> kRanges = {{
    {0x00A1, 0x00A1, CharClass::Punct},   // inverted exclamation
    {0x00A2, 0x00A6, CharClass::Symbol},  // cent..broken bar
    {0x00A7, 0x00A7, CharClass::Punct},
    {0x00A8, 0x00A9, CharClass::Symbol},
    {0x00AA, 0x00AA, CharClass::Letter},
    {0x00AB, 0x00AB, CharClass::Punct},
    {0x00AC, 0x00AC, CharClass::Symbol},
    {0x00AE, 0x00B1, CharClass::Symbol},
    {0x00B2, 0x00B3, CharClass::Digit},
    {0x00B4, 0x00B4, CharClass::Symbol},
    {0x00B5, 0x00B5, CharClass::Letter},
    {0x00B6, 0x00B7, CharClass::Punct},
    {0x00B8, 0x00B8, CharClass::Symbol},
    {0x00B9, 0x00B9, CharClass::Digit},
    {0x00BA, 0x00BA, CharClass::Letter},
    {0x00BB, 0x00BB, CharClass::Punct},
    {0x00BC, 0x00BE, CharClass::Digit},  // vulgar fractions
    {0x00BF, 0x00BF, CharClass::Punct},
    {0x00C0, 0x00D6, CharClass::Letter},
    {0x00D7, 0x00D7, CharClass::Symbol},
    {0x00D8, 0x00F6, CharClass::Letter},
    {0x00F7, 0x00F7, CharClass::Symbol},
    {0x00F8, 0x02AF, CharClass::Letter},  // Latin extended + IPA
    {0x02B0, 0x02FF, CharClass::Other},   // modifier letters/symbols, mixed
    {0x0370, 0x0385, CharClass::Letter},
    {0x0386, 0x03FF, CharClass::Letter},  // Greek
    {0x0400, 0x04FF, CharClass::Letter},  // Cyrillic
    {0x0531, 0x0556, CharClass::Letter},  // Armenian
    {0x0561, 0x0587, CharClass::Letter},
    {0x05D0, 0x05EA, CharClass::Letter},  // Hebrew
    {0x0620, 0x064A, CharClass::Letter},  // Arabic
    {0x0660, 0x0669, CharClass::Digit},
    {0x0671, 0x06D3, CharClass::Letter},
    {0x06F0, 0x06F9, CharClass::Digit},
    {0x0905, 0x0939, CharClass::Letter},  // Devanagari
    {0x0966, 0x096F, CharClass::Digit},
    {0x09E6, 0x09EF, CharClass::Digit},
    {0x0E01, 0x0E2E, CharClass::Letter},  // Thai
    {0x0E50, 0x0E59, CharClass::Digit},
    {0x10A0, 0x10FF, CharClass::Letter},  // Georgian
    {0x1E00, 0x1FFC, CharClass::Letter},  // Latin/Greek extended
    {0x2010, 0x2027, CharClass::Punct},
    {0x2030, 0x2043, CharClass::Punct},
    {0x2044, 0x2044, CharClass::Symbol},  // fraction slash
    {0x2045, 0x2051, CharClass::Punct},
    {0x2052, 0x2052, CharClass::Symbol},
    {0x2053, 0x205E, CharClass::Punct},
    {0x2070, 0x2070, CharClass::Digit},
    {0x2074, 0x2079, CharClass::Digit},
    {0x2080, 0x2089, CharClass::Digit},
    {0x20A0, 0x20BF, CharClass::Symbol},  // currency signs
    {0x2122, 0x2122, CharClass::Symbol},
    {0x2150, 0x215F, CharClass::Digit},
    {0x2160, 0x2182, CharClass::Digit},  // Roman numerals
    {0x2190, 0x2BFF, CharClass::Symbol},  // arrows, math, technical, shapes
    {0x3001, 0x3003, CharClass::Punct},
    {0x3008, 0x3011, CharClass::Punct},
    {0x3014, 0x301F, CharClass::Punct},
    {0x3041, 0x3096, CharClass::Letter},  // hiragana
    {0x30A1, 0x30FA, CharClass::Letter},  // katakana
    {0x30FB, 0x30FB, CharClass::Punct},
    {0x30FC, 0x30FC, CharClass::Letter},
    {0x3105, 0x312F, CharClass::Letter},
    {0x3400, 0x4DBF, CharClass::Letter},
    {0x4E00, 0x9FFF, CharClass::Letter},  // CJK unified
    {0xAC00, 0xD7A3, CharClass::Letter},  // Hangul
    {0xF900, 0xFA6D, CharClass::Letter},
    {0xFB00, 0xFB06, CharClass::Letter},
    {0xFF01, 0xFF03, CharClass::Punct},
    {0xFF04, 0xFF04, CharClass::Symbol},
    {0xFF05, 0xFF0A, CharClass::Punct},
    {0xFF0B, 0xFF0B, CharClass::Symbol},
    {0xFF0C, 0xFF0F, CharClass::Punct},
    {0xFF10, 0xFF19, CharClass::Digit},
    {0xFF1A, 0xFF1B, CharClass::Punct},
    {0xFF1F, 0xFF20, CharClass::Punct},
    {0x1F000, 0x1FAFF, CharClass::Symbol},  // emoji and friends
}};

CharClass ascii_class(char32_t cp) {
  if (cp == 0x20 || (cp >= 0x09 && cp <= 0x0D)) return CharClass::Space;
  if (cp >= '0' && cp <= '9') return CharClass::Digit;
  if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return CharClass::Letter;
  switch (cp) {
    case '!': case '"': case '#': case '%': case '&': case '\'':
    case '(': case ')': case '*': case ',': case '-': case '.':
    case '/': case ':': case ';': case '?': case '@': case '[':
    case '\\': case ']': case '_': case '{': case '}':
      return CharClass::Punct;
    case '$': case '+': case '<': case '=': case '>': case '^':
    case '`': case '|': case '~':
      return CharClass::Symbol;
    default:
      return CharClass::Other;  // controls
  }
}

}  // namespace

const char* to_string(CharClass c) {
  switch (c) {
    case CharClass::Letter: return "LETTER";
    case CharClass::Digit: return "DIGIT";
    case CharClass::Punct: return "PUNCT";
    case CharClass::Symbol: return "SYMBOL";
    case CharClass::Other: return "OTHER";
    case CharClass::Space: return "SPACE";
  }
  return "OTHER";
}

bool is_space(char32_t cp) {
  if (cp <= 0x7F) return cp == 0x20 || (cp >= 0x09 && cp <= 0x0D);
  switch (cp) {
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

CharClass char_class(char32_t cp) {
  if (cp <= 0x7F) return ascii_class(cp);
  if (is_space(cp)) return CharClass::Space;
  auto it = std::upper_bound(kRanges.begin(), kRanges.end(), cp,
                             [](char32_t v, const Range& r) { return v < r.lo; });
  if (it != kRanges.begin()) {
    --it;
    if (cp >= it->lo && cp <= it->hi) return it->cls;
  }
  return CharClass::Other;
}

std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  while (i < text.size()) {
    const unsigned char b0 = byte(i);
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 >> 5) == 0x6 && i + 1 < text.size() && (byte(i + 1) & 0xC0) == 0x80) {
      cp = (char32_t(b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F);
      len = 2;
      if (cp < 0x80) cp = 0xFFFD;
    } else if ((b0 >> 4) == 0xE && i + 2 < text.size() && (byte(i + 1) & 0xC0) == 0x80 &&
               (byte(i + 2) & 0xC0) == 0x80) {
      cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(byte(i + 1) & 0x3F) << 6) |
           (byte(i + 2) & 0x3F);
      len = 3;
      if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    } else if ((b0 >> 3) == 0x1E && i + 3 < text.size() && (byte(i + 1) & 0xC0) == 0x80 &&
               (byte(i + 2) & 0xC0) == 0x80 && (byte(i + 3) & 0xC0) == 0x80) {
      cp = (char32_t(b0 & 0x07) << 18) | (char32_t(byte(i + 1) & 0x3F) << 12) |
           (char32_t(byte(i + 2) & 0x3F) << 6) | (byte(i + 3) & 0x3F);
      len = 4;
      if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
    }
    if (cp == 0xFFFD) len = 1;
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
  std::string out;
  for (char32_t cp : cps) out += encode_utf8(cp);
  return out;
}

std::size_t scalar_length(std::string_view text) {
  return decode_utf8(text).size();
}

std::string slice_scalars(std::string_view text, std::size_t start, std::size_t end) {
  const auto cps = decode_utf8(text);
  std::vector<char32_t> slice;
  for (std::size_t i = start; i < end && i < cps.size(); ++i) slice.push_back(cps[i]);
  return encode_utf8(slice);
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace ttsfe
