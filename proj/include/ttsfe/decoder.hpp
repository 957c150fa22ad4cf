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

#include <string>
#include <vector>

#include <Eigen/Core>

#include "ttsfe/rules.hpp"
#include "ttsfe/tokenizer.hpp"

namespace ttsfe {

// Per-token rule scores, n x R, pre-softmax.
using RuleLogits = Eigen::MatrixXd;

// A full left-to-right tiling of the token sequence by rule applications,
// scored by the sum of per-application log-probabilities taken at each
// application's start token.
struct NormalizationPlan {
  std::vector<RuleApplication> applications;
  double score = 0.0;
};

// Sets masked-out entries to -inf, leaves the rest untouched. Rejects shape
// mismatch and rows with no applicable rule (the PLAIN fallback guarantees at
// least one per row; an empty row signals a rules/tokenizer mismatch).
RuleLogits mask_logits(const RuleLogits& logits, const BoolMat& mask);

// Row-wise log-softmax over the finite entries; -inf entries stay -inf.
RuleLogits masked_log_softmax(const RuleLogits& masked);

// True iff the applications cover [0, n) exactly, in order, with no overlap.
bool tiles_exactly(const NormalizationPlan& plan, int n);

// Beam search over covers. Beam state is the next uncovered position; ties
// break toward fewer applications, then the lexicographically smaller rule id
// sequence. With beam_width at least the per-position ambiguity this is exact.
NormalizationPlan beam_search(const RuleLogits& masked, const TokenSequence& seq,
                              const RuleRegistry& registry, int beam_width = 8);

// Exhaustive enumeration of all covers; exact optimum. Guarded to n <= 12.
NormalizationPlan brute_force_decode(const RuleLogits& masked, const TokenSequence& seq,
                                     const RuleRegistry& registry);

// Joins the plan's verbalized words with single spaces. Consecutive PLAIN
// tokens drawn from the same source word are re-joined without spaces, silent
// rules contribute nothing, and the final string is ASCII-lowercased.
std::string render(const NormalizationPlan& plan, const TokenSequence& seq,
                   const RuleRegistry& registry);

}  // namespace ttsfe
