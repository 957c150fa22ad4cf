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

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ttsfe/common.hpp"
#include "ttsfe/decoder.hpp"
#include "ttsfe/rules.hpp"
#include "ttsfe/synth.hpp"
#include "ttsfe/tokenizer.hpp"

using namespace ttsfe;

namespace {

const RuleRegistry& demo_registry() {
  static const RuleRegistry reg =
      RuleRegistry::from_json_text(RuleRegistry::demo_manifest_text());
  return reg;
}

std::string joined(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

std::string random_line(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "St.",  "Dr.",   "Mr.",  "etc.", "42",    "007",  "3.14", "7/8",
      "1st",  "22nd",  "5:30", "$9",   "$3.50", "10%",  "5 kg", "NASA",
      "1999", "3/4/2021", "1/2023", "May 2021", "555-1234", "a.com",
      "hello", "world", "the",  ",",   ".",     "'",    "-",    "X"};
  const int len = rng.uniform_int(0, 8);
  std::string s;
  for (int i = 0; i < len; ++i) {
    if (i) s += ' ';
    s += pieces[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(pieces.size()) - 1))];
  }
  return s;
}

}  // namespace

TEST_CASE("the demo ruleset covers all fourteen semiotic classes") {
  const auto& reg = demo_registry();
  CHECK(reg.size() >= 20);
  std::set<SemioticClass> classes;
  for (const auto& r : reg.rules()) classes.insert(r.semiotic_class);
  CHECK(static_cast<int>(classes.size()) == kNumSemioticClasses);
  for (int i = 0; i < reg.size(); ++i) CHECK(reg.rule(i).rule_id == i);
  CHECK(reg.id_of("PLAIN") == 0);
  CHECK(reg.rule(0).max_span == 1);
  CHECK(reg.rule(0).semiotic_class == SemioticClass::Plain);
}

TEST_CASE("semiotic class names round-trip") {
  for (int i = 0; i < kNumSemioticClasses; ++i) {
    const auto c = static_cast<SemioticClass>(i);
    CHECK(parse_semiotic_class(to_string(c)) == c);
  }
  CHECK_THROWS_AS(parse_semiotic_class("NOT_A_CLASS"), Error);
}

TEST_CASE("fraction matcher consumes digit slash digit") {
  const auto& reg = demo_registry();
  const int frac = reg.id_of("FRACTION_3TOK");
  const auto seq = tokenize("7/8");
  REQUIRE(seq.n() == 3);
  const auto span = reg.can_parse(frac, seq, 0);
  REQUIRE(span.has_value());
  CHECK(*span == 3);
  CHECK_FALSE(reg.can_parse(frac, tokenize("hello"), 0).has_value());
  CHECK_FALSE(reg.can_parse(frac, tokenize("1/2023"), 0).has_value());
}

TEST_CASE("the plain fallback applies everywhere") {
  const auto& reg = demo_registry();
  for (const char* text : {"hello", "42", "$", "世界", ". . ."}) {
    const auto seq = tokenize(text);
    for (int pos = 0; pos < seq.n(); ++pos) {
      const auto span = reg.can_parse(0, seq, pos);
      REQUIRE(span.has_value());
      CHECK(*span == 1);
    }
  }
}

TEST_CASE("verbalizers match hand expectations") {
  const auto& reg = demo_registry();
  const auto say = [&](const char* text, const char* rule) {
    const auto seq = tokenize(text);
    const int id = reg.id_of(rule);
    const auto span = reg.can_parse(id, seq, 0);
    REQUIRE_MESSAGE(span.has_value(), rule << " on " << text);
    return joined(reg.verbalize(id, seq, 0, *span));
  };
  CHECK(say("42", "CARDINAL_1TOK") == "forty two");
  CHECK(say("7/8", "FRACTION_3TOK") == "seven eighths");
  CHECK(say("St.", "ST_AS_STREET") == "street");
  CHECK(say("St.", "ST_AS_SAINT") == "saint");
  CHECK(say("Dr.", "DR_AS_DOCTOR") == "doctor");
  CHECK(say("Dr.", "DR_AS_DRIVE") == "drive");
  CHECK(say("3/4/2021", "DATE_SLASH_MDY") == "march fourth twenty twenty one");
  CHECK(say("1/2023", "DATE_SLASH_MY") == "january twenty twenty three");
  CHECK(say("5:00", "TIME_COLON") == "five o'clock");
  CHECK(say("$3.50", "CURRENCY_DOLLAR_PREFIX") == "three dollars and fifty cents");
  CHECK(say("NASA", "LETTERS_SPELL") == "n a s a");
  CHECK(say("example.com", "URL_DOTTED") == "example dot com");
  CHECK(say(",", "PUNCT_SILENT").empty());
}

TEST_CASE("verbalize rejects spans can_parse would not return") {
  const auto& reg = demo_registry();
  const auto seq = tokenize("7/8");
  CHECK_THROWS_AS(reg.verbalize(reg.id_of("FRACTION_3TOK"), seq, 0, 2), Error);
  CHECK_THROWS_AS(reg.verbalize(reg.id_of("DATE_SLASH_MDY"), seq, 0, 3), Error);
}

TEST_CASE("applicability mask matches can_parse") {
  const auto& reg = demo_registry();
  const auto seq = tokenize("42");
  const auto mask = reg.applicability_mask(seq);
  REQUIRE(mask.rows() == 1);
  REQUIRE(mask.cols() == reg.size());
  CHECK(mask(0, reg.id_of("PLAIN")));
  CHECK(mask(0, reg.id_of("CARDINAL_1TOK")));
  CHECK_FALSE(mask(0, reg.id_of("ORDINAL_SUFFIX")));
  CHECK_FALSE(mask(0, reg.id_of("DATE_SLASH_MDY")));
  CHECK_FALSE(mask(0, reg.id_of("YEAR_4DIGIT")));

  const auto frac = reg.applicability_mask(tokenize("7/8"));
  const int f = reg.id_of("FRACTION_3TOK");
  CHECK(frac(0, f));
  CHECK_FALSE(frac(1, f));
  CHECK_FALSE(frac(2, f));

  CHECK(reg.applicability_mask(tokenize("")).rows() == 0);
}

TEST_CASE("ambiguous abbreviations admit two non-plain rules") {
  const auto& reg = demo_registry();
  const auto st = reg.applicability_mask(tokenize("St."));
  CHECK(st(0, reg.id_of("ST_AS_SAINT")));
  CHECK(st(0, reg.id_of("ST_AS_STREET")));
  const auto dr = reg.applicability_mask(tokenize("Dr."));
  CHECK(dr(0, reg.id_of("DR_AS_DOCTOR")));
  CHECK(dr(0, reg.id_of("DR_AS_DRIVE")));
}

TEST_CASE("mask soundness: every admitted rule verbalizes") {
  const auto& reg = demo_registry();
  Rng rng(97);
  for (int iter = 0; iter < 200; ++iter) {
    const auto seq = tokenize(random_line(rng));
    const auto mask = reg.applicability_mask(seq);
    for (int i = 0; i < seq.n(); ++i) {
      bool any = false;
      for (int r = 0; r < reg.size(); ++r) {
        if (!mask(i, r)) continue;
        any = true;
        const auto span = reg.can_parse(r, seq, i);
        REQUIRE(span.has_value());
        CHECK(*span <= reg.rule(r).max_span);
        CHECK(i + *span <= seq.n());
        const auto words = reg.verbalize(r, seq, i, *span);
        if (reg.rule(r).name != "PUNCT_SILENT") {
          CHECK_FALSE(words.empty());
          for (const auto& w : words) CHECK_FALSE(w.empty());
        }
      }
      CHECK(any);
      CHECK(mask(i, 0));
    }
  }
}

TEST_CASE("manifest loading validates structure") {
  CHECK_THROWS_AS(RuleRegistry::from_json_text("{not json"), Error);
  CHECK_THROWS_AS(RuleRegistry::from_json_text("{\"version\":1,\"rules\":[]}"),
                  Error);
  // Rule 0 must be the PLAIN fallback.
  CHECK_THROWS_AS(RuleRegistry::from_json_text(R"({"version":1,"rules":[
    {"id":0,"name":"X","class":"PUNCT","max_span":1,
     "matcher":{"kind":"punct"},"verbalizer":"silent"}]})"),
                  Error);
  // Ids must be dense.
  CHECK_THROWS_AS(RuleRegistry::from_json_text(R"({"version":1,"rules":[
    {"id":0,"name":"PLAIN","class":"PLAIN","max_span":1,
     "matcher":{"kind":"any"},"verbalizer":"plain"},
    {"id":2,"name":"Y","class":"PUNCT","max_span":1,
     "matcher":{"kind":"punct"},"verbalizer":"silent"}]})"),
                  Error);
}

TEST_CASE("checked-in manifest matches the generator and hashes stably") {
  const std::string text = RuleRegistry::demo_manifest_text();
  std::ifstream in(std::string(TTSFE_DATA_DIR) + "/ruleset.json", std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "data/ruleset.json is missing");
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == text);

  const auto a = RuleRegistry::from_json_text(text);
  const auto b = RuleRegistry::load(std::string(TTSFE_DATA_DIR) + "/ruleset.json");
  CHECK(a.manifest_hash() == b.manifest_hash());
  CHECK(a.size() == b.size());
}

TEST_CASE("golden corpus normalizations hold exactly") {
  const auto& reg = demo_registry();
  const auto corpus = golden_corpus(reg);
  CHECK(corpus.size() >= 100);
  std::set<int> used;
  for (const auto& e : corpus) {
    CAPTURE(e.text);
    const auto seq = tokenize(e.text);
    NormalizationPlan plan;
    for (const auto& [start, rule_id] : e.rules) {
      const auto span = reg.can_parse(rule_id, seq, start);
      REQUIRE(span.has_value());
      plan.applications.push_back({rule_id, start, *span, {}});
      used.insert(rule_id);
    }
    REQUIRE(tiles_exactly(plan, seq.n()));
    CHECK(render(plan, seq, reg) == e.norm);
  }
  // Every rule in the inventory is exercised by the corpus.
  CHECK(static_cast<int>(used.size()) == reg.size());
}

TEST_CASE("checked-in golden corpus matches regeneration") {
  std::ifstream in(std::string(TTSFE_DATA_DIR) + "/golden_tn.jsonl",
                   std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "data/golden_tn.jsonl is missing");
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == golden_corpus_jsonl(demo_registry()));
}
