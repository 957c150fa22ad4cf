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

#include <cmath>
#include <string>
#include <vector>

#include "ttsfe/common.hpp"
#include "ttsfe/metrics.hpp"

using namespace ttsfe;

namespace {

std::vector<std::string> random_words(Rng& rng, int max_len) {
  static const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  std::vector<std::string> out;
  const int len = rng.uniform_int(0, max_len);
  for (int i = 0; i < len; ++i)
    out.push_back(vocab[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(vocab.size()) - 1))]);
  return out;
}

}  // namespace

TEST_CASE("line accuracy counts exact matches modulo whitespace") {
  CHECK(line_accuracy({"a", "b"}, {"a", "b"}) == 1.0);
  CHECK(line_accuracy({"a b"}, {"a  b"}) == 1.0);
  CHECK(line_accuracy({" a b\t", "x", "y", "z"}, {"a b", "x", "y", "q"}) == 0.75);
  CHECK(line_accuracy({"A"}, {"a"}) == 0.0);
  CHECK_THROWS_AS(line_accuracy({"a"}, {"a", "b"}), Error);
  CHECK_THROWS_AS(line_accuracy({}, {}), Error);
}

TEST_CASE("wer follows the word edit distance") {
  CHECK(wer("one two three", "one two three") == 0.0);
  CHECK(wer("one three", "one two three") == doctest::Approx(1.0 / 3.0));
  CHECK(wer("x", "a b") == 1.0);
  CHECK(wer("a b c d", "a b") == 1.0);
  CHECK_THROWS_AS(wer("anything", "   "), Error);
  for (int k = 1; k <= 5; ++k) {
    std::string ref;
    for (int i = 0; i < k; ++i) ref += "w ";
    CHECK(wer("", ref) == 1.0);
  }
}

TEST_CASE("word edit distance satisfies the triangle inequality") {
  Rng rng(55);
  for (int iter = 0; iter < 300; ++iter) {
    const auto a = random_words(rng, 8);
    const auto b = random_words(rng, 8);
    const auto c = random_words(rng, 8);
    CHECK(word_edit_distance(a, c) <=
          word_edit_distance(a, b) + word_edit_distance(b, c));
    CHECK(word_edit_distance(a, a) == 0);
    CHECK(word_edit_distance(a, b) == word_edit_distance(b, a));
  }
}

TEST_CASE("corpus WER is the length-weighted mean of sentence WERs") {
  const std::vector<std::string> pred = {"one three", "x"};
  const std::vector<std::string> ref = {"one two three", "a b"};
  CHECK(corpus_wer(pred, ref) == doctest::Approx(3.0 / 5.0));

  Rng rng(56);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<std::string> preds, refs;
    double dist = 0, words = 0;
    const int lines = rng.uniform_int(1, 6);
    for (int i = 0; i < lines; ++i) {
      auto p = random_words(rng, 6);
      auto r = random_words(rng, 6);
      if (r.empty()) r.push_back("w");
      std::string ps, rs;
      for (const auto& w : p) ps += w + " ";
      for (const auto& w : r) rs += w + " ";
      preds.push_back(ps);
      refs.push_back(rs);
      dist += word_edit_distance(p, r);
      words += static_cast<double>(r.size());
    }
    CHECK(corpus_wer(preds, refs) == doctest::Approx(dist / words));
  }
}

TEST_CASE("homograph micro and macro averages diverge under imbalance") {
  std::vector<HdPrediction> ex;
  for (int i = 0; i < 9; ++i) ex.push_back({"bass", "bass_fish", "bass_fish"});
  ex.push_back({"bass", "bass_fish", "bass_low"});
  ex.push_back({"bow", "bow_knot", "bow_bend"});
  const auto [micro, macro] = hd_accuracy(ex);
  CHECK(micro == doctest::Approx(9.0 / 11.0));
  CHECK(macro == doctest::Approx(0.45));
}

TEST_CASE("balanced classes make micro equal macro") {
  Rng rng(57);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<HdPrediction> ex;
    const int classes = rng.uniform_int(2, 6);
    const int per_class = rng.uniform_int(3, 12);
    for (int c = 0; c < classes; ++c) {
      const std::string gold = "label_" + std::to_string(c);
      for (int i = 0; i < per_class; ++i) {
        const bool correct = rng.uniform() < 0.7;
        ex.push_back({"hg" + std::to_string(c), gold,
                      correct ? gold : std::string("other")});
      }
    }
    const auto [micro, macro] = hd_accuracy(ex);
    CHECK(micro == macro);
  }
}

TEST_CASE("all-correct and empty homograph inputs") {
  std::vector<HdPrediction> ex = {{"bass", "a", "a"}, {"bow", "b", "b"}};
  const auto [micro, macro] = hd_accuracy(ex);
  CHECK(micro == 1.0);
  CHECK(macro == 1.0);
  CHECK_THROWS_AS(hd_accuracy({}), Error);
}

TEST_CASE("pos accuracy is the fraction of matching tags") {
  CHECK(pos_accuracy({1, 2, 3}, {1, 2, 3}) == 1.0);
  CHECK(pos_accuracy({1, 2}, {1, 3}) == 0.5);
  CHECK_THROWS_AS(pos_accuracy({1}, {1, 2}), Error);
  CHECK_THROWS_AS(pos_accuracy({}, {}), Error);
}

TEST_CASE("metric reports serialize one key per line") {
  EvalReport report;
  report.set("tn.line_acc", 0.9875);
  report.set("tn.wer", 0.015625);
  report.set("pos.acc", 1.0);
  report.set("hd.micro", 0.5);
  report.set("hd.macro", 0.25);
  report.set_count("tn.examples", 80);
  CHECK(report.at("tn.wer") == 0.015625);
  CHECK(report.has("hd.macro"));
  CHECK_FALSE(report.has("hd.nope"));
  CHECK_THROWS_AS(report.at("hd.nope"), Error);
  CHECK(report.to_text() ==
        "tn.line_acc 0.987500\n"
        "tn.wer 0.015625\n"
        "pos.acc 1.000000\n"
        "hd.micro 0.500000\n"
        "hd.macro 0.250000\n"
        "tn.examples 80\n");
  report.set("pos.acc", 0.5);
  CHECK(report.at("pos.acc") == 0.5);
}
