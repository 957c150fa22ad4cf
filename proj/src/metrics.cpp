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

#include "ttsfe/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

#include "ttsfe/common.hpp"

namespace ttsfe {

namespace {

bool ws(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending = false;
  for (char c : text) {
    if (ws(c)) {
      pending = !out.empty();
    } else {
      if (pending) out += ' ';
      pending = false;
      out += c;
    }
  }
  return out;
}

std::vector<std::string> split_words(std::string_view text) {
  const std::string norm = normalize_whitespace(text);
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start < norm.size()) {
    const std::size_t sp = norm.find(' ', start);
    const std::size_t end = sp == std::string::npos ? norm.size() : sp;
    words.push_back(norm.substr(start, end - start));
    start = end + 1;
  }
  return words;
}

int word_edit_distance(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double line_accuracy(const std::vector<std::string>& predictions,
                     const std::vector<std::string>& references) {
  if (predictions.size() != references.size())
    fail_data("line accuracy needs equally many predictions and references");
  if (references.empty()) fail_data("line accuracy over an empty corpus");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < references.size(); ++i) {
    if (normalize_whitespace(predictions[i]) == normalize_whitespace(references[i]))
      ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(references.size());
}

double wer(const std::string& prediction, const std::string& reference) {
  const auto ref = split_words(reference);
  if (ref.empty()) fail_data("WER reference has no words");
  const auto pred = split_words(prediction);
  return static_cast<double>(word_edit_distance(pred, ref)) /
         static_cast<double>(ref.size());
}

double corpus_wer(const std::vector<std::string>& predictions,
                  const std::vector<std::string>& references) {
  if (predictions.size() != references.size())
    fail_data("corpus WER needs equally many predictions and references");
  std::int64_t dist = 0, words = 0;
  for (std::size_t i = 0; i < references.size(); ++i) {
    const auto ref = split_words(references[i]);
    if (ref.empty()) fail_data("WER reference has no words");
    dist += word_edit_distance(split_words(predictions[i]), ref);
    words += static_cast<std::int64_t>(ref.size());
  }
  if (words == 0) fail_data("corpus WER over an empty corpus");
  return static_cast<double>(dist) / static_cast<double>(words);
}

std::pair<double, double> hd_accuracy(const std::vector<HdPrediction>& examples) {
  if (examples.empty()) fail_data("homograph accuracy over an empty corpus");
  std::map<std::pair<std::string, std::string>, std::pair<int, int>> classes;
  int correct = 0;
  for (const auto& e : examples) {
    auto& [c_correct, c_total] = classes[{e.homograph, e.gold}];
    ++c_total;
    if (e.predicted == e.gold) {
      ++c_correct;
      ++correct;
    }
  }
  const double micro =
      static_cast<double>(correct) / static_cast<double>(examples.size());
  bool balanced = true;
  for (const auto& [key, counts] : classes)
    balanced = balanced && counts.second == classes.begin()->second.second;
  if (balanced) {
    // With equal class sizes the unweighted mean coincides with the pooled
    // mean; reusing it keeps the identity exact in floating point.
    return {micro, micro};
  }
  double macro = 0.0;
  for (const auto& [key, counts] : classes) {
    macro += static_cast<double>(counts.first) / static_cast<double>(counts.second);
  }
  macro /= static_cast<double>(classes.size());
  return {micro, macro};
}

double pos_accuracy(const std::vector<int>& predicted, const std::vector<int>& gold) {
  if (predicted.size() != gold.size())
    fail_data("POS accuracy needs aligned tag sequences");
  if (gold.empty()) fail_data("POS accuracy over an empty corpus");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predicted[i] == gold[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

void EvalReport::set(const std::string& key, double value) {
  for (auto& kv : metrics) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  metrics.emplace_back(key, value);
}

void EvalReport::set_count(const std::string& key, std::int64_t value) {
  for (auto& kv : counts) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  counts.emplace_back(key, value);
}

bool EvalReport::has(const std::string& key) const {
  for (const auto& kv : metrics) {
    if (kv.first == key) return true;
  }
  return false;
}

double EvalReport::at(const std::string& key) const {
  for (const auto& kv : metrics) {
    if (kv.first == key) return kv.second;
  }
  fail_model("missing metric: " + key);
}

std::string EvalReport::to_text() const {
  std::string out;
  for (const auto& [key, value] : metrics) {
    out += key;
    out += ' ';
    out += format_value(value);
    out += '\n';
  }
  for (const auto& [key, value] : counts) {
    out += key;
    out += ' ';
    out += std::to_string(value);
    out += '\n';
  }
  return out;
}

}  // namespace ttsfe
