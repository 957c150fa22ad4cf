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

// Regenerates every checked-in generated data file. Output is deterministic;
// tests assert the committed files match regeneration byte for byte.

#include <cstdio>
#include <fstream>
#include <string>

#include "ttsfe/rules.hpp"
#include "ttsfe/synth.hpp"

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data";
  try {
    ttsfe::RuleRegistry::write_demo_manifest(dir + "/ruleset.json");
    const auto registry = ttsfe::RuleRegistry::load(dir + "/ruleset.json");
    std::ofstream golden(dir + "/golden_tn.jsonl", std::ios::binary);
    golden << ttsfe::golden_corpus_jsonl(registry);

    ttsfe::write_tn(dir + "/tn_desk.jsonl", ttsfe::desk_tn_corpus(registry));
    ttsfe::write_pos(dir + "/pos_desk.jsonl", ttsfe::desk_pos_corpus());

    const ttsfe::HomographLexicon desk_lex = ttsfe::desk_lexicon();
    desk_lex.save(dir + "/lexicon_desk.tsv");
    ttsfe::write_hd(dir + "/hd_desk.tsv", ttsfe::desk_hd_corpus(desk_lex));

    const ttsfe::HomographLexicon full_lex = ttsfe::full_scale_lexicon();
    full_lex.save(dir + "/lexicon_full.tsv");
    ttsfe::write_hd(dir + "/hd_full.tsv", ttsfe::full_scale_hd_corpus(full_lex));

    std::printf("wrote fixtures under %s/\n", dir.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
