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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ttsfe/rules.hpp"

namespace ttsfe {

// One normalization example: source text, its spoken form, and the gold rule
// applications as (start token index, rule id) pairs tiling the sequence.
struct TNExample {
  std::string text;
  std::string norm;
  std::vector<std::pair<int, int>> rules;
};

struct POSExample {
  std::vector<std::string> words;
  std::vector<std::string> tags;
};

// One homograph occurrence. Offsets are unicode scalar indices into sentence,
// half-open, covering a span that case-insensitively equals the homograph.
struct HDExample {
  std::string homograph;
  std::string label;
  std::string sentence;
  int start = 0;
  int end = 0;
};

struct BalanceReport {
  std::map<std::pair<std::string, std::string>, int> counts;
  int total = 0;
  bool is_balanced = true;
  std::vector<std::string> violations;
};

enum class OffsetUnit { Scalars, Bytes };

// Loaded examples always carry scalar offsets; `offsets` records how the file
// itself counted (auto-detected by validating the span slice both ways).
struct HdLoadResult {
  std::vector<HDExample> examples;
  OffsetUnit offsets = OffsetUnit::Scalars;
};

HdLoadResult load_hd(const std::string& path);
void write_hd(const std::string& path, const std::vector<HDExample>& examples);

BalanceReport validate_balance(const std::vector<HDExample>& examples);

// Per-(homograph, label) split: floor/ceil of fraction*count to train, the
// rest to test, deterministic under seed. Classes too small to land on both
// sides are reported through `warnings` when provided.
std::pair<std::vector<HDExample>, std::vector<HDExample>> stratified_split(
    const std::vector<HDExample>& examples, double fraction, std::uint64_t seed,
    std::vector<std::string>* warnings = nullptr);

std::vector<TNExample> load_tn(const std::string& path, const RuleRegistry& registry);
std::string tn_jsonl(const std::vector<TNExample>& examples);
void write_tn(const std::string& path, const std::vector<TNExample>& examples);

std::vector<POSExample> load_pos(const std::string& path);
std::string pos_jsonl(const std::vector<POSExample>& examples);
void write_pos(const std::string& path, const std::vector<POSExample>& examples);

}  // namespace ttsfe
