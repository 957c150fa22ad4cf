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
#include <utility>
#include <vector>

namespace ttsfe {

// Collapses whitespace runs to single spaces and trims the ends.
std::string normalize_whitespace(std::string_view text);

// Whitespace-split words after normalize_whitespace. Case is preserved.
std::vector<std::string> split_words(std::string_view text);

// Unit-cost Levenshtein distance over word sequences.
int word_edit_distance(const std::vector<std::string>& a,
                       const std::vector<std::string>& b);

// Fraction of exact matches after whitespace normalization. Case-sensitive.
double line_accuracy(const std::vector<std::string>& predictions,
                     const std::vector<std::string>& references);

// Word-level edit distance divided by reference word count.
double wer(const std::string& prediction, const std::string& reference);

// Sum of distances over sum of reference lengths.
double corpus_wer(const std::vector<std::string>& predictions,
                  const std::vector<std::string>& references);

struct HdPrediction {
  std::string homograph;
  std::string gold;
  std::string predicted;
};

// (micro, macro). Micro pools all examples; macro is the unweighted mean of
// per-(homograph, gold label) class accuracies over classes that appear.
std::pair<double, double> hd_accuracy(const std::vector<HdPrediction>& examples);

// Fraction of matching tags over aligned sequences.
double pos_accuracy(const std::vector<int>& predicted, const std::vector<int>& gold);

// Flat metric report: one "key value" line per metric, insertion-ordered.
struct EvalReport {
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, std::int64_t>> counts;

  void set(const std::string& key, double value);
  void set_count(const std::string& key, std::int64_t value);
  bool has(const std::string& key) const;
  double at(const std::string& key) const;
  std::string to_text() const;
};

}  // namespace ttsfe
