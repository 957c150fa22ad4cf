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

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttsfe/tokenizer.hpp"

namespace ttsfe {

using BoolMat = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// The 14 semiotic classes of the demonstration ruleset.
enum class SemioticClass {
  Plain,
  Punct,
  Cardinal,
  Ordinal,
  Decimal,
  Fraction,
  Date,
  Time,
  Currency,
  Measure,
  Abbreviation,
  Letters,
  Telephone,
  Url,
};

inline constexpr int kNumSemioticClasses = 14;

const char* to_string(SemioticClass c);
SemioticClass parse_semiotic_class(const std::string& name);

struct RuleSpec {
  int rule_id = 0;
  std::string name;
  SemioticClass semiotic_class = SemioticClass::Plain;
  int max_span = 1;

  // Matcher: a kind plus its parameters (all data-driven via the manifest).
  std::string matcher_kind;
  std::vector<std::string> texts;   // "exact"
  std::vector<std::string> months;  // "month_year"
  std::map<std::string, std::pair<std::string, std::string>> units;  // "number_unit"
  std::vector<std::string> tlds;    // "dotted_domain"
  int min_len = 0;                  // "digit_run"

  // Verbalizer name plus optional fixed output.
  std::string verbalizer;
  std::vector<std::string> fixed_words;
};

struct RuleApplication {
  int rule_id = 0;
  int start = 0;
  int span = 1;
  std::vector<std::string> words;
};

// Immutable rule inventory loaded from a versioned JSON manifest. Rule 0 is
// always the PLAIN fallback, applicable to every token, so every sequence
// admits a full cover.
class RuleRegistry {
 public:
  static RuleRegistry load(const std::string& path);
  static RuleRegistry from_json_text(const std::string& text);

  // Writes the canonical demonstration manifest (24 rules, 14 classes).
  static void write_demo_manifest(const std::string& path);
  static std::string demo_manifest_text();

  int size() const { return static_cast<int>(rules_.size()); }
  const RuleSpec& rule(int id) const;
  const std::vector<RuleSpec>& rules() const { return rules_; }
  int id_of(const std::string& name) const;  // throws if unknown
  std::uint64_t manifest_hash() const { return manifest_hash_; }

  // Span the rule would consume at `pos`, or nullopt when it cannot parse
  // the tokens there. Matchers see only [pos, pos + max_span).
  std::optional<int> can_parse(int rule_id, const TokenSequence& seq, int pos) const;

  // Deterministic word output; requires `span` == the value can_parse
  // returns at `pos` (contract violation otherwise).
  std::vector<std::string> verbalize(int rule_id, const TokenSequence& seq, int pos,
                                     int span) const;

  // n x R; entry (i, r) true iff rule r parses at position i. Column 0 is
  // all-true and every row has at least one true entry.
  BoolMat applicability_mask(const TokenSequence& seq) const;

 private:
  void validate() const;

  std::vector<RuleSpec> rules_;
  std::map<std::string, int> by_name_;
  std::uint64_t manifest_hash_ = 0;
};

}  // namespace ttsfe
