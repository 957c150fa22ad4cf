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

#include "ttsfe/rules.hpp"

#include <array>
#include <cassert>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ttsfe/common.hpp"
#include "ttsfe/numwords.hpp"

namespace ttsfe {

namespace {

constexpr std::array<const char*, kNumSemioticClasses> kClassNames = {
    "PLAIN",    "PUNCT",    "CARDINAL",     "ORDINAL", "DECIMAL",
    "FRACTION", "DATE",     "TIME",         "CURRENCY", "MEASURE",
    "ABBREVIATION", "LETTERS", "TELEPHONE", "URL"};

constexpr std::array<const char*, 12> kMonthNames = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

bool digits_token(const Token& t) { return all_ascii_digits(t.text); }

bool plain_integer(const std::string& s) {
  // Digit string without a redundant leading zero, small enough to spell.
  if (!all_ascii_digits(s)) return false;
  if (s.size() > 1 && s[0] == '0') return false;
  return s.size() <= 9;
}

bool in_range(const std::string& s, std::uint64_t lo, std::uint64_t hi,
              std::size_t max_len = 9) {
  if (!all_ascii_digits(s) || s.size() > max_len) return false;
  const std::uint64_t v = parse_digits(s);
  return v >= lo && v <= hi;
}

bool year_token(const std::string& s) {
  return s.size() == 4 && in_range(s, 1000, 2999);
}

std::string correct_ordinal_suffix(std::uint64_t v) {
  const std::uint64_t mod100 = v % 100;
  if (mod100 >= 11 && mod100 <= 13) return "th";
  switch (v % 10) {
    case 1: return "st";
    case 2: return "nd";
    case 3: return "rd";
    default: return "th";
  }
}

std::vector<std::string> spell_number(const std::string& digits) {
  if (plain_integer(digits)) return cardinal_words(parse_digits(digits));
  return digit_words(digits);
}

}  // namespace

const char* to_string(SemioticClass c) {
  return kClassNames[static_cast<std::size_t>(c)];
}

SemioticClass parse_semiotic_class(const std::string& name) {
  for (std::size_t i = 0; i < kClassNames.size(); ++i) {
    if (name == kClassNames[i]) return static_cast<SemioticClass>(i);
  }
  fail_data("unknown semiotic class: " + name);
}

const RuleSpec& RuleRegistry::rule(int id) const {
  if (id < 0 || id >= size()) fail_model("rule id out of range");
  return rules_[static_cast<std::size_t>(id)];
}

int RuleRegistry::id_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) fail_model("unknown rule name: " + name);
  return it->second;
}

std::optional<int> RuleRegistry::can_parse(int rule_id, const TokenSequence& seq,
                                           int pos) const {
  assert(pos >= 0 && pos < seq.n());
  const RuleSpec& r = rule(rule_id);
  const int n = seq.n();
  const auto tok = [&](int i) -> const Token& {
    return seq.tokens[static_cast<std::size_t>(i)];
  };
  const auto remaining = n - pos;

  const std::string& kind = r.matcher_kind;
  if (kind == "any") return 1;

  if (kind == "punct") {
    return tok(pos).uclass == CharClass::Punct ? std::optional<int>(1) : std::nullopt;
  }

  if (kind == "integer") {
    return digits_token(tok(pos)) ? std::optional<int>(1) : std::nullopt;
  }

  if (kind == "ordinal_suffix") {
    if (remaining < 2) return std::nullopt;
    const std::string& num = tok(pos).text;
    if (!plain_integer(num) || num == "0") return std::nullopt;
    const std::string suffix = ascii_lower(tok(pos + 1).text);
    if (suffix != correct_ordinal_suffix(parse_digits(num))) return std::nullopt;
    return 2;
  }

  if (kind == "decimal") {
    if (remaining < 3) return std::nullopt;
    if (!digits_token(tok(pos)) || tok(pos).text.size() > 9) return std::nullopt;
    if (tok(pos + 1).text != ".") return std::nullopt;
    if (!digits_token(tok(pos + 2)) || tok(pos + 2).text.size() > 9) return std::nullopt;
    return 3;
  }

  if (kind == "fraction") {
    if (remaining < 3) return std::nullopt;
    if (!plain_integer(tok(pos).text)) return std::nullopt;
    if (tok(pos + 1).text != "/") return std::nullopt;
    if (!in_range(tok(pos + 2).text, 2, 999, 3)) return std::nullopt;
    if (tok(pos + 2).text[0] == '0') return std::nullopt;
    return 3;
  }

  if (kind == "date_slash_mdy") {
    if (remaining < 5) return std::nullopt;
    if (!in_range(tok(pos).text, 1, 12, 2)) return std::nullopt;
    if (tok(pos + 1).text != "/") return std::nullopt;
    if (!in_range(tok(pos + 2).text, 1, 31, 2)) return std::nullopt;
    if (tok(pos + 3).text != "/") return std::nullopt;
    if (!year_token(tok(pos + 4).text)) return std::nullopt;
    return 5;
  }

  if (kind == "date_slash_my") {
    if (remaining < 3) return std::nullopt;
    if (!in_range(tok(pos).text, 1, 12, 2)) return std::nullopt;
    if (tok(pos + 1).text != "/") return std::nullopt;
    if (!year_token(tok(pos + 2).text)) return std::nullopt;
    return 3;
  }

  if (kind == "month_year") {
    if (remaining < 2) return std::nullopt;
    const std::string m = ascii_lower(tok(pos).text);
    bool known = false;
    for (const auto& name : r.months) known = known || name == m;
    if (!known) return std::nullopt;
    if (!year_token(tok(pos + 1).text)) return std::nullopt;
    return 2;
  }

  if (kind == "year") {
    return year_token(tok(pos).text) ? std::optional<int>(1) : std::nullopt;
  }

  if (kind == "time_colon") {
    if (remaining < 3) return std::nullopt;
    if (!in_range(tok(pos).text, 0, 23, 2)) return std::nullopt;
    if (tok(pos + 1).text != ":") return std::nullopt;
    if (tok(pos + 2).text.size() != 2 || !in_range(tok(pos + 2).text, 0, 59, 2))
      return std::nullopt;
    return 3;
  }

  if (kind == "currency_prefix") {
    if (remaining < 2) return std::nullopt;
    if (r.texts.empty() || tok(pos).text != r.texts[0]) return std::nullopt;
    if (!plain_integer(tok(pos + 1).text)) return std::nullopt;
    if (remaining >= 4 && tok(pos + 2).text == "." &&
        digits_token(tok(pos + 3)) && tok(pos + 3).text.size() == 2) {
      return 4;
    }
    return 2;
  }

  if (kind == "number_unit") {
    if (remaining < 2) return std::nullopt;
    if (!plain_integer(tok(pos).text)) return std::nullopt;
    return r.units.count(tok(pos + 1).text) ? std::optional<int>(2) : std::nullopt;
  }

  if (kind == "exact") {
    if (remaining < static_cast<int>(r.texts.size())) return std::nullopt;
    for (std::size_t i = 0; i < r.texts.size(); ++i) {
      if (tok(pos + static_cast<int>(i)).text != r.texts[i]) return std::nullopt;
    }
    return static_cast<int>(r.texts.size());
  }

  if (kind == "all_caps") {
    const std::string& t = tok(pos).text;
    if (t.size() < 2) return std::nullopt;
    for (char c : t) {
      if (c < 'A' || c > 'Z') return std::nullopt;
    }
    return 1;
  }

  if (kind == "digit_run") {
    const std::string& t = tok(pos).text;
    if (!all_ascii_digits(t) || static_cast<int>(t.size()) < r.min_len)
      return std::nullopt;
    return 1;
  }

  if (kind == "phone_dashed") {
    const auto group = [&](int i, std::size_t len) {
      return i < n && digits_token(tok(i)) && tok(i).text.size() == len;
    };
    const auto dash = [&](int i) { return i < n && tok(i).text == "-"; };
    if (group(pos, 3) && dash(pos + 1) && group(pos + 2, 3) && dash(pos + 3) &&
        group(pos + 4, 4)) {
      return 5;
    }
    if (group(pos, 3) && dash(pos + 1) && group(pos + 2, 4)) return 3;
    return std::nullopt;
  }

  if (kind == "dotted_domain") {
    if (remaining < 3) return std::nullopt;
    if (tok(pos).uclass != CharClass::Letter) return std::nullopt;
    if (tok(pos + 1).text != ".") return std::nullopt;
    const std::string tld = ascii_lower(tok(pos + 2).text);
    for (const auto& t : r.tlds) {
      if (t == tld) return 3;
    }
    return std::nullopt;
  }

  fail_data("unknown matcher kind: " + kind);
}

std::vector<std::string> RuleRegistry::verbalize(int rule_id, const TokenSequence& seq,
                                                 int pos, int span) const {
  const auto parsed = can_parse(rule_id, seq, pos);
  if (!parsed || *parsed != span) {
    fail_model("verbalize called with a span can_parse would not return (rule " +
               rule(rule_id).name + ")");
  }
  const RuleSpec& r = rule(rule_id);
  const auto tok = [&](int i) -> const std::string& {
    return seq.tokens[static_cast<std::size_t>(pos + i)].text;
  };
  const std::string& v = r.verbalizer;

  if (v == "plain") return {tok(0)};
  if (v == "silent") return {};
  if (v == "fixed_words") return r.fixed_words;
  if (v == "cardinal") return spell_number(tok(0));
  if (v == "ordinal") {
    auto words = ordinal_words(parse_digits(tok(0)));
    return words;
  }
  if (v == "decimal") {
    auto words = spell_number(tok(0));
    words.emplace_back("point");
    auto frac = digit_words(tok(2));
    words.insert(words.end(), frac.begin(), frac.end());
    return words;
  }
  if (v == "fraction") {
    const std::uint64_t num = parse_digits(tok(0));
    auto words = cardinal_words(num);
    auto den = denominator_words(parse_digits(tok(2)), num != 1);
    words.insert(words.end(), den.begin(), den.end());
    return words;
  }
  if (v == "date_mdy") {
    const auto month = parse_digits(tok(0));
    std::vector<std::string> words = {kMonthNames[month - 1]};
    auto day = ordinal_words(parse_digits(tok(2)));
    words.insert(words.end(), day.begin(), day.end());
    auto year = year_words(static_cast<int>(parse_digits(tok(4))));
    words.insert(words.end(), year.begin(), year.end());
    return words;
  }
  if (v == "date_my") {
    const auto month = parse_digits(tok(0));
    std::vector<std::string> words = {kMonthNames[month - 1]};
    auto year = year_words(static_cast<int>(parse_digits(tok(2))));
    words.insert(words.end(), year.begin(), year.end());
    return words;
  }
  if (v == "month_year") {
    std::vector<std::string> words = {ascii_lower(tok(0))};
    auto year = year_words(static_cast<int>(parse_digits(tok(1))));
    words.insert(words.end(), year.begin(), year.end());
    return words;
  }
  if (v == "year") return year_words(static_cast<int>(parse_digits(tok(0))));
  if (v == "time") {
    auto words = cardinal_words(parse_digits(tok(0)));
    const std::uint64_t minutes = parse_digits(tok(2));
    if (minutes == 0) {
      words.emplace_back("o'clock");
    } else if (minutes < 10) {
      words.emplace_back("oh");
      auto m = cardinal_words(minutes);
      words.insert(words.end(), m.begin(), m.end());
    } else {
      auto m = cardinal_words(minutes);
      words.insert(words.end(), m.begin(), m.end());
    }
    return words;
  }
  if (v == "currency_usd") {
    const std::uint64_t dollars = parse_digits(tok(1));
    auto words = cardinal_words(dollars);
    words.emplace_back(dollars == 1 ? "dollar" : "dollars");
    if (span == 4) {
      const std::uint64_t cents = parse_digits(tok(3));
      words.emplace_back("and");
      auto c = cardinal_words(cents);
      words.insert(words.end(), c.begin(), c.end());
      words.emplace_back(cents == 1 ? "cent" : "cents");
    }
    return words;
  }
  if (v == "measure") {
    const std::uint64_t value = parse_digits(tok(0));
    auto words = cardinal_words(value);
    const auto& unit = r.units.at(tok(1));
    words.push_back(value == 1 ? unit.first : unit.second);
    return words;
  }
  if (v == "percent") {
    auto words = spell_number(tok(0));
    words.emplace_back("percent");
    return words;
  }
  if (v == "spell") {
    std::vector<std::string> words;
    for (char c : ascii_lower(tok(0))) words.emplace_back(1, c);
    return words;
  }
  if (v == "digits") {
    std::vector<std::string> words;
    for (int i = 0; i < span; ++i) {
      if (!all_ascii_digits(tok(i))) continue;  // skip dashes
      auto d = digit_words(tok(i));
      words.insert(words.end(), d.begin(), d.end());
    }
    return words;
  }
  if (v == "url") {
    std::vector<std::string> words;
    for (int i = 0; i < span; ++i) {
      words.push_back(tok(i) == "." ? "dot" : ascii_lower(tok(i)));
    }
    return words;
  }
  fail_data("unknown verbalizer: " + v);
}

BoolMat RuleRegistry::applicability_mask(const TokenSequence& seq) const {
  BoolMat mask(seq.n(), size());
  for (int i = 0; i < seq.n(); ++i) {
    for (int r = 0; r < size(); ++r) {
      mask(i, r) = can_parse(r, seq, i).has_value();
    }
  }
  return mask;
}

void RuleRegistry::validate() const {
  if (rules_.empty()) fail_data("ruleset manifest has no rules");
  for (int i = 0; i < size(); ++i) {
    if (rules_[static_cast<std::size_t>(i)].rule_id != i)
      fail_data("rule ids must be dense 0..R-1");
  }
  const RuleSpec& plain = rules_[0];
  if (plain.semiotic_class != SemioticClass::Plain || plain.max_span != 1 ||
      plain.matcher_kind != "any") {
    fail_data("rule 0 must be the PLAIN fallback with max_span 1");
  }
}

RuleRegistry RuleRegistry::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_data("cannot open ruleset manifest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

RuleRegistry RuleRegistry::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail_data(std::string("ruleset manifest parse error: ") + e.what());
  }
  if (!doc.contains("version") || !doc.contains("rules"))
    fail_data("ruleset manifest missing version/rules");

  RuleRegistry reg;
  reg.manifest_hash_ = fnv1a64(text);
  for (const auto& jr : doc["rules"]) {
    RuleSpec r;
    r.rule_id = jr.at("id").get<int>();
    r.name = jr.at("name").get<std::string>();
    r.semiotic_class = parse_semiotic_class(jr.at("class").get<std::string>());
    r.max_span = jr.at("max_span").get<int>();
    if (r.max_span <= 0) fail_data("rule " + r.name + ": max_span must be positive");
    const auto& jm = jr.at("matcher");
    r.matcher_kind = jm.at("kind").get<std::string>();
    if (jm.contains("texts")) r.texts = jm["texts"].get<std::vector<std::string>>();
    if (jm.contains("months")) r.months = jm["months"].get<std::vector<std::string>>();
    if (jm.contains("tlds")) r.tlds = jm["tlds"].get<std::vector<std::string>>();
    if (jm.contains("min_len")) r.min_len = jm["min_len"].get<int>();
    if (jm.contains("units")) {
      for (const auto& [unit, forms] : jm["units"].items()) {
        r.units[unit] = {forms.at(0).get<std::string>(), forms.at(1).get<std::string>()};
      }
    }
    const auto& jv = jr.at("verbalizer");
    if (jv.is_string()) {
      r.verbalizer = jv.get<std::string>();
    } else {
      r.verbalizer = jv.at("name").get<std::string>();
      if (jv.contains("words"))
        r.fixed_words = jv["words"].get<std::vector<std::string>>();
    }
    reg.by_name_[r.name] = r.rule_id;
    reg.rules_.push_back(std::move(r));
  }
  reg.validate();
  return reg;
}

std::string RuleRegistry::demo_manifest_text() {
  using json = nlohmann::ordered_json;
  json rules = json::array();
  int next_id = 0;
  const auto add = [&](const std::string& name, const std::string& cls, int max_span,
                       json matcher, json verbalizer) {
    rules.push_back({{"id", next_id++},
                     {"name", name},
                     {"class", cls},
                     {"max_span", max_span},
                     {"matcher", std::move(matcher)},
                     {"verbalizer", std::move(verbalizer)}});
  };

  json months = json::array();
  for (const char* m : kMonthNames) months.push_back(m);

  add("PLAIN", "PLAIN", 1, {{"kind", "any"}}, "plain");
  add("PUNCT_SILENT", "PUNCT", 1, {{"kind", "punct"}}, "silent");
  add("CARDINAL_1TOK", "CARDINAL", 1, {{"kind", "integer"}}, "cardinal");
  add("ORDINAL_SUFFIX", "ORDINAL", 2, {{"kind", "ordinal_suffix"}}, "ordinal");
  add("DECIMAL_3TOK", "DECIMAL", 3, {{"kind", "decimal"}}, "decimal");
  add("FRACTION_3TOK", "FRACTION", 3, {{"kind", "fraction"}}, "fraction");
  add("DATE_SLASH_MDY", "DATE", 5, {{"kind", "date_slash_mdy"}}, "date_mdy");
  add("DATE_SLASH_MY", "DATE", 3, {{"kind", "date_slash_my"}}, "date_my");
  add("DATE_MONTH_YEAR", "DATE", 2, {{"kind", "month_year"}, {"months", months}},
      "month_year");
  add("YEAR_4DIGIT", "DATE", 1, {{"kind", "year"}}, "year");
  add("TIME_COLON", "TIME", 3, {{"kind", "time_colon"}}, "time");
  add("CURRENCY_DOLLAR_PREFIX", "CURRENCY", 4,
      {{"kind", "currency_prefix"}, {"texts", json::array({"$"})}}, "currency_usd");
  add("MEASURE_UNIT_SUFFIX", "MEASURE", 2,
      {{"kind", "number_unit"},
       {"units",
        json{{"kg", json::array({"kilogram", "kilograms"})},
             {"km", json::array({"kilometer", "kilometers"})},
             {"cm", json::array({"centimeter", "centimeters"})},
             {"mm", json::array({"millimeter", "millimeters"})},
             {"lb", json::array({"pound", "pounds"})},
             {"oz", json::array({"ounce", "ounces"})},
             {"ft", json::array({"foot", "feet"})},
             {"mi", json::array({"mile", "miles"})},
             {"hz", json::array({"hertz", "hertz"})}}}},
      "measure");
  add("PERCENT_SUFFIX", "MEASURE", 2,
      {{"kind", "number_unit"},
       {"units", json{{"%", json::array({"percent", "percent"})}}}},
      "percent");
  add("ST_AS_SAINT", "ABBREVIATION", 2,
      {{"kind", "exact"}, {"texts", json::array({"St", "."})}},
      json{{"name", "fixed_words"}, {"words", json::array({"saint"})}});
  add("ST_AS_STREET", "ABBREVIATION", 2,
      {{"kind", "exact"}, {"texts", json::array({"St", "."})}},
      json{{"name", "fixed_words"}, {"words", json::array({"street"})}});
  add("DR_AS_DOCTOR", "ABBREVIATION", 2,
      {{"kind", "exact"}, {"texts", json::array({"Dr", "."})}},
      json{{"name", "fixed_words"}, {"words", json::array({"doctor"})}});
  add("DR_AS_DRIVE", "ABBREVIATION", 2,
      {{"kind", "exact"}, {"texts", json::array({"Dr", "."})}},
      json{{"name", "fixed_words"}, {"words", json::array({"drive"})}});
  add("MR_AS_MISTER", "ABBREVIATION", 2,
      {{"kind", "exact"}, {"texts", json::array({"Mr", "."})}},
      json{{"name", "fixed_words"}, {"words", json::array({"mister"})}});
  add("ETC_AS_ET_CETERA", "ABBREVIATION", 2,
      {{"kind", "exact"}, {"texts", json::array({"etc", "."})}},
      json{{"name", "fixed_words"}, {"words", json::array({"et", "cetera"})}});
  add("LETTERS_SPELL", "LETTERS", 1, {{"kind", "all_caps"}}, "spell");
  add("TELEPHONE_DIGITS", "TELEPHONE", 1, {{"kind", "digit_run"}, {"min_len", 7}},
      "digits");
  add("TELEPHONE_DASHED", "TELEPHONE", 5, {{"kind", "phone_dashed"}}, "digits");
  add("URL_DOTTED", "URL", 3,
      {{"kind", "dotted_domain"},
       {"tlds", json::array({"com", "org", "net", "edu", "gov", "io"})}},
      "url");

  json doc = {{"version", 1},
              {"description", "demonstration token-to-normalization ruleset"},
              {"rules", rules}};
  return doc.dump(2) + "\n";
}

void RuleRegistry::write_demo_manifest(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_data("cannot write ruleset manifest: " + path);
  out << demo_manifest_text();
}

}  // namespace ttsfe
