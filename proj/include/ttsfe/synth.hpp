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

#include "ttsfe/data.hpp"
#include "ttsfe/lexicon.hpp"
#include "ttsfe/rules.hpp"

namespace ttsfe {

// Hand-curated normalization conformance set: each entry's spoken form was
// written out by hand, not produced by the code under test. Start positions
// are derived by tiling the named rules left to right.
std::vector<TNExample> golden_corpus(const RuleRegistry& registry);

// The corpus serialized in the normalization example line format.
std::string golden_corpus_jsonl(const RuleRegistry& registry);

// Desk-scale training corpora: small, hand-curated, and together they exercise
// every rule, every tag, and every desk homograph label. Texts never repeat
// and each recurring word keeps one tag, so a model can fit them exactly.
std::vector<TNExample> desk_tn_corpus(const RuleRegistry& registry);
std::vector<POSExample> desk_pos_corpus();
HomographLexicon desk_lexicon();
std::vector<HDExample> desk_hd_corpus(const HomographLexicon& lexicon);

// Full-scale homograph inventory: 162 entries, 160 with two pronunciations
// and 2 with three, 326 labels in all, plus a balanced corpus of ten cue
// sentences per label (3260 rows).
HomographLexicon full_scale_lexicon();
std::vector<HDExample> full_scale_hd_corpus(const HomographLexicon& lexicon);

}  // namespace ttsfe
