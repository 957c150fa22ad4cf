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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ttsfe/data.hpp"
#include "ttsfe/synth.hpp"
#include "ttsfe/unicode.hpp"

using namespace ttsfe;

namespace {

const RuleRegistry& demo_registry() {
  static const RuleRegistry reg =
      RuleRegistry::from_json_text(RuleRegistry::demo_manifest_text());
  return reg;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("./" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  void fill(const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  std::string slurp() const {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
};

std::string data_path(const char* name) {
  return std::string(TTSFE_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("homograph data round-trips through tsv with scalar offsets") {
  const HomographLexicon lex = desk_lexicon();
  const std::vector<HDExample> corpus = desk_hd_corpus(lex);
  REQUIRE(corpus.size() == 80);

  TempFile file("data_hd_roundtrip.tsv");
  write_hd(file.path, corpus);
  const HdLoadResult loaded = load_hd(file.path);
  CHECK(loaded.offsets == OffsetUnit::Scalars);
  REQUIRE(loaded.examples.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(loaded.examples[i].homograph == corpus[i].homograph);
    CHECK(loaded.examples[i].label == corpus[i].label);
    CHECK(loaded.examples[i].sentence == corpus[i].sentence);
    CHECK(loaded.examples[i].start == corpus[i].start);
    CHECK(loaded.examples[i].end == corpus[i].end);
  }

  SUBCASE("every span slices to its homograph") {
    for (const HDExample& e : loaded.examples) {
      CHECK(slice_scalars(e.sentence, static_cast<std::size_t>(e.start),
                          static_cast<std::size_t>(e.end)) == e.homograph);
    }
  }
}

TEST_CASE("homograph loader auto-detects byte offsets and converts them") {
  // "naïve" puts a two-byte scalar before the span, so byte and scalar
  // offsets disagree: scalars [10, 14) vs bytes [11, 15).
  const std::string sentence = "the na\xc3\xafve bass swam off";
  TempFile file("data_hd_bytes.tsv");

  SUBCASE("scalar offsets load as scalars") {
    file.fill("homograph\twordid\tsentence\tstart\tend\n"
              "bass\tbass_fish\t" + sentence + "\t10\t14\n");
    const HdLoadResult r = load_hd(file.path);
    CHECK(r.offsets == OffsetUnit::Scalars);
    CHECK(r.examples[0].start == 10);
    CHECK(r.examples[0].end == 14);
  }
  SUBCASE("byte offsets are detected and rewritten to scalars") {
    file.fill("homograph\twordid\tsentence\tstart\tend\n"
              "bass\tbass_fish\t" + sentence + "\t11\t15\n"
              "bass\tbass_music\tthe bass line thumped\t4\t8\n");
    const HdLoadResult r = load_hd(file.path);
    CHECK(r.offsets == OffsetUnit::Bytes);
    CHECK(r.examples[0].start == 10);
    CHECK(r.examples[0].end == 14);
    CHECK(r.examples[1].start == 4);
    CHECK(r.examples[1].end == 8);
    CHECK(slice_scalars(r.examples[0].sentence, 10, 14) == "bass");
  }
  SUBCASE("spans that fit neither unit are rejected with the line number") {
    file.fill("homograph\twordid\tsentence\tstart\tend\n"
              "bass\tbass_fish\t" + sentence + "\t12\t16\n");
    try {
      load_hd(file.path);
      FAIL("expected a data error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Data);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("capitalized spans match case-insensitively") {
    file.fill("homograph\twordid\tsentence\tstart\tend\n"
              "bass\tbass_fish\tBass swim deep\t0\t4\n");
    const HdLoadResult r = load_hd(file.path);
    CHECK(r.examples[0].start == 0);
  }
  SUBCASE("malformed rows are rejected with line numbers") {
    file.fill("homograph\twordid\tsentence\tstart\tend\n"
              "bass\tbass_fish\tthe bass swam\t4\n");
    CHECK_THROWS_WITH_AS(load_hd(file.path),
                         doctest::Contains("line 2"), Error);
    file.fill("homograph\twordid\tsentence\tstart\tend\n"
              "bass\tbass_fish\tthe bass swam\tfour\t8\n");
    CHECK_THROWS_WITH_AS(load_hd(file.path),
                         doctest::Contains("not an integer"), Error);
    file.fill("wrong\theader\n");
    CHECK_THROWS_WITH_AS(load_hd(file.path),
                         doctest::Contains("header"), Error);
    file.fill("homograph\twordid\tsentence\tstart\tend\n");
    CHECK_THROWS_AS(load_hd(file.path), Error);
  }
}

TEST_CASE("balance validation spots uneven pronunciation coverage") {
  const HomographLexicon lex = desk_lexicon();
  std::vector<HDExample> corpus = desk_hd_corpus(lex);
  BalanceReport report = validate_balance(corpus);
  CHECK(report.is_balanced);
  CHECK(report.total == 80);
  CHECK(report.counts.at({"bass", "bass_fish"}) == 10);
  CHECK(report.counts.at({"wind", "wind_crank"}) == 10);

  SUBCASE("an 89-to-1 skew is reported as a violation") {
    std::vector<HDExample> skewed;
    const HDExample& fish = corpus[0];
    HDExample music = corpus[10];
    REQUIRE(fish.label == "bass_fish");
    REQUIRE(music.label == "bass_music");
    for (int i = 0; i < 89; ++i) skewed.push_back(fish);
    skewed.push_back(music);
    const BalanceReport r = validate_balance(skewed);
    CHECK(!r.is_balanced);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].find("bass") != std::string::npos);
    CHECK(r.violations[0].find("bass_fish=89") != std::string::npos);
    CHECK(r.violations[0].find("bass_music=1") != std::string::npos);
  }
}

TEST_CASE("stratified split keeps classes on both sides") {
  const HomographLexicon lex = desk_lexicon();
  const std::vector<HDExample> corpus = desk_hd_corpus(lex);

  SUBCASE("a 0.9 fraction sends 9 of 10 to train per class") {
    auto [train, test] = stratified_split(corpus, 0.9, 17);
    CHECK(train.size() == 72);
    CHECK(test.size() == 8);
    const BalanceReport tr = validate_balance(train);
    const BalanceReport te = validate_balance(test);
    CHECK(tr.is_balanced);
    CHECK(te.is_balanced);
    for (const auto& [key, count] : tr.counts) CHECK(count == 9);
    for (const auto& [key, count] : te.counts) CHECK(count == 1);
  }
  SUBCASE("a 0.5 fraction splits 5 and 5") {
    auto [train, test] = stratified_split(corpus, 0.5, 17);
    CHECK(train.size() == 40);
    CHECK(test.size() == 40);
    for (const auto& [key, count] : validate_balance(train).counts)
      CHECK(count == 5);
  }
  SUBCASE("the split is deterministic in the seed and varies with it") {
    auto [a_train, a_test] = stratified_split(corpus, 0.9, 17);
    auto [b_train, b_test] = stratified_split(corpus, 0.9, 17);
    auto [c_train, c_test] = stratified_split(corpus, 0.9, 18);
    auto sentences = [](const std::vector<HDExample>& v) {
      std::vector<std::string> out;
      for (const auto& e : v) out.push_back(e.sentence);
      return out;
    };
    CHECK(sentences(a_test) == sentences(b_test));
    CHECK(sentences(a_test) != sentences(c_test));
  }
  SUBCASE("tiny classes are kept and reported") {
    std::vector<HDExample> tiny(corpus.begin(), corpus.begin() + 1);
    std::vector<std::string> warnings;
    auto [train, test] = stratified_split(tiny, 0.9, 17, &warnings);
    CHECK(train.size() + test.size() == 1);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("bass") != std::string::npos);
  }
  SUBCASE("degenerate fractions are rejected") {
    CHECK_THROWS_AS(stratified_split(corpus, 0.0, 17), Error);
    CHECK_THROWS_AS(stratified_split(corpus, 1.0, 17), Error);
  }
}

TEST_CASE("normalization examples are checked against the rules on load") {
  TempFile file("data_tn_check.jsonl");

  SUBCASE("valid lines round-trip") {
    const std::vector<TNExample> corpus = desk_tn_corpus(demo_registry());
    write_tn(file.path, corpus);
    const std::vector<TNExample> loaded = load_tn(file.path, demo_registry());
    REQUIRE(loaded.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      CHECK(loaded[i].text == corpus[i].text);
      CHECK(loaded[i].norm == corpus[i].norm);
      CHECK(loaded[i].rules == corpus[i].rules);
    }
  }
  SUBCASE("schema, tiling, applicability, and rendering are all enforced") {
    file.fill(R"({"schema":2,"text":"hi","norm":"hi","rules":[[0,0]]})" "\n");
    CHECK_THROWS_WITH_AS(load_tn(file.path, demo_registry()),
                         doctest::Contains("schema"), Error);
    file.fill(R"({"schema":1,"text":"hi there","norm":"hi there","rules":[[0,0]]})" "\n");
    CHECK_THROWS_WITH_AS(load_tn(file.path, demo_registry()),
                         doctest::Contains("cover"), Error);
    file.fill(R"({"schema":1,"text":"hi there","norm":"hi there","rules":[[0,0],[2,0]]})" "\n");
    CHECK_THROWS_WITH_AS(load_tn(file.path, demo_registry()),
                         doctest::Contains("tile"), Error);
    file.fill(R"({"schema":1,"text":"hi","norm":"hi","rules":[[0,2]]})" "\n");
    CHECK_THROWS_WITH_AS(load_tn(file.path, demo_registry()),
                         doctest::Contains("does not apply"), Error);
    file.fill(R"({"schema":1,"text":"hi","norm":"hello","rules":[[0,0]]})" "\n");
    CHECK_THROWS_WITH_AS(load_tn(file.path, demo_registry()),
                         doctest::Contains("render"), Error);
    file.fill(R"({"schema":1,"text":"hi","norm":"hi","rules":[[0,99]]})" "\n");
    CHECK_THROWS_WITH_AS(load_tn(file.path, demo_registry()),
                         doctest::Contains("unknown rule"), Error);
    file.fill("not json\n");
    CHECK_THROWS_AS(load_tn(file.path, demo_registry()), Error);
  }
}

TEST_CASE("tagging examples validate words and tags on load") {
  TempFile file("data_pos_check.jsonl");

  SUBCASE("valid lines round-trip") {
    const std::vector<POSExample> corpus = desk_pos_corpus();
    write_pos(file.path, corpus);
    const std::vector<POSExample> loaded = load_pos(file.path);
    REQUIRE(loaded.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      CHECK(loaded[i].words == corpus[i].words);
      CHECK(loaded[i].tags == corpus[i].tags);
    }
  }
  SUBCASE("malformed lines are rejected with line numbers") {
    file.fill(R"({"schema":1,"words":["a","b"],"tags":["noun"]})" "\n");
    CHECK_THROWS_WITH_AS(load_pos(file.path),
                         doctest::Contains("line 1"), Error);
    file.fill(R"({"schema":1,"words":["a"],"tags":["nonsense"]})" "\n");
    CHECK_THROWS_WITH_AS(load_pos(file.path),
                         doctest::Contains("nonsense"), Error);
    file.fill(R"({"schema":1,"words":["a b"],"tags":["noun"]})" "\n");
    CHECK_THROWS_WITH_AS(load_pos(file.path),
                         doctest::Contains("whitespace"), Error);
  }
}

TEST_CASE("desk corpora have the advertised shape and coverage") {
  const std::vector<TNExample> tn = desk_tn_corpus(demo_registry());
  CHECK(tn.size() == 50);
  std::set<int> used_rules;
  std::set<std::string> texts;
  for (const TNExample& e : tn) {
    texts.insert(e.text);
    for (const auto& [start, rule] : e.rules) used_rules.insert(rule);
  }
  CHECK(texts.size() == tn.size());
  CHECK(used_rules.size() == static_cast<std::size_t>(demo_registry().size()));

  const std::vector<POSExample> pos = desk_pos_corpus();
  CHECK(pos.size() == 50);
  std::set<std::string> used_tags;
  std::map<std::string, std::string> word_tag;
  for (const POSExample& e : pos)
    for (std::size_t i = 0; i < e.words.size(); ++i) {
      used_tags.insert(e.tags[i]);
      const auto [it, inserted] = word_tag.emplace(e.words[i], e.tags[i]);
      CAPTURE(e.words[i]);
      CHECK(it->second == e.tags[i]);
    }
  CHECK(used_tags.size() == 15);

  const HomographLexicon lex = desk_lexicon();
  const std::vector<HDExample> hd = desk_hd_corpus(lex);
  CHECK(hd.size() == 80);
  CHECK(validate_balance(hd).is_balanced);
  for (const HDExample& e : hd)
    CHECK(slice_scalars(e.sentence, static_cast<std::size_t>(e.start),
                        static_cast<std::size_t>(e.end)) == e.homograph);
}

TEST_CASE("full-scale inventory matches the published structure") {
  const HomographLexicon lex = full_scale_lexicon();
  CHECK(lex.entries().size() == 162);
  CHECK(lex.total_labels() == 326);
  int three_label = 0;
  for (const HomographEntry& e : lex.entries()) {
    CHECK(e.labels.size() >= 2);
    if (e.labels.size() == 3) ++three_label;
  }
  CHECK(three_label == 2);

  const std::vector<HDExample> corpus = full_scale_hd_corpus(lex);
  CHECK(corpus.size() == 3260);
  const BalanceReport report = validate_balance(corpus);
  CHECK(report.is_balanced);
  CHECK(report.counts.size() == 326);
  for (const auto& [key, count] : report.counts) CHECK(count == 10);

  SUBCASE("a 0.9 stratified split covers every label on both sides") {
    auto [train, test] = stratified_split(corpus, 0.9, 3);
    CHECK(train.size() == 2934);
    CHECK(test.size() == 326);
    CHECK(validate_balance(test).counts.size() == 326);
  }
}

TEST_CASE("checked-in fixtures match regeneration byte for byte") {
  const RuleRegistry registry = RuleRegistry::load(data_path("ruleset.json"));

  TempFile tn("data_regen_tn.jsonl");
  write_tn(tn.path, desk_tn_corpus(registry));
  TempFile pos("data_regen_pos.jsonl");
  write_pos(pos.path, desk_pos_corpus());
  TempFile hd("data_regen_hd.tsv");
  write_hd(hd.path, desk_hd_corpus(desk_lexicon()));
  TempFile full_hd("data_regen_hd_full.tsv");
  write_hd(full_hd.path, full_scale_hd_corpus(full_scale_lexicon()));

  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  CHECK(tn.slurp() == slurp(data_path("tn_desk.jsonl")));
  CHECK(pos.slurp() == slurp(data_path("pos_desk.jsonl")));
  CHECK(hd.slurp() == slurp(data_path("hd_desk.tsv")));
  CHECK(full_hd.slurp() == slurp(data_path("hd_full.tsv")));
  CHECK(desk_lexicon().to_tsv_text() == slurp(data_path("lexicon_desk.tsv")));
  CHECK(full_scale_lexicon().to_tsv_text() == slurp(data_path("lexicon_full.tsv")));
}
