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

#include "ttsfe/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "ttsfe/unicode.hpp"

namespace ttsfe {

const std::array<std::string, PosTagset::kSize>& PosTagset::labels() {
  static const std::array<std::string, kSize> kLabels = {
      "adjective",   "adverb",   "article",  "auxiliary", "conjunction",
      "interjection", "name",     "noun",     "participle", "particle",
      "preposition", "pronoun",  "punctuation", "spelling", "verb"};
  return kLabels;
}

int PosTagset::index(const std::string& label) {
  const auto& all = labels();
  for (int i = 0; i < kSize; ++i)
    if (all[static_cast<std::size_t>(i)] == label) return i;
  fail_data("unknown part-of-speech label: " + label);
}

const std::string& PosTagset::label(int index) {
  if (index < 0 || index >= kSize)
    fail_model("part-of-speech index out of range");
  return labels()[static_cast<std::size_t>(index)];
}

bool PosTagset::contains(const std::string& label) {
  const auto& all = labels();
  for (const auto& l : all)
    if (l == label) return true;
  return false;
}

void HomographLexicon::add(const std::string& key,
                           std::vector<std::string> labels) {
  if (key.empty()) fail_data("homograph key is empty");
  if (key != ascii_lower(key))
    fail_data("homograph key must be lowercase: " + key);
  if (labels.size() < 2)
    fail_data("homograph needs at least two pronunciation labels: " + key);
  for (const auto& l : labels)
    if (l.empty()) fail_data("empty pronunciation label for: " + key);
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] == labels[j])
        fail_data("duplicate pronunciation label for: " + key);
  if (index_.count(key)) fail_data("duplicate homograph entry: " + key);
  index_[key] = entries_.size();
  entries_.push_back({key, std::move(labels)});
}

bool HomographLexicon::has(const std::string& key) const {
  return index_.count(key) != 0;
}

const HomographEntry& HomographLexicon::entry(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) fail_data("unknown homograph: " + key);
  return entries_[it->second];
}

int HomographLexicon::label_index(const std::string& key,
                                  const std::string& label) const {
  const HomographEntry& e = entry(key);
  for (std::size_t i = 0; i < e.labels.size(); ++i)
    if (e.labels[i] == label) return static_cast<int>(i);
  fail_data("unknown pronunciation label \"" + label + "\" for homograph: " +
            key);
}

std::size_t HomographLexicon::total_labels() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.labels.size();
  return n;
}

HomographLexicon HomographLexicon::from_tsv_text(const std::string& text) {
  HomographLexicon lex;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      fail_data("lexicon line " + std::to_string(line_no) +
                ": expected key<TAB>labels");
    const std::string key = line.substr(0, tab);
    std::vector<std::string> labels;
    std::string label;
    std::istringstream rest(line.substr(tab + 1));
    while (std::getline(rest, label, ',')) labels.push_back(label);
    try {
      lex.add(key, std::move(labels));
    } catch (const Error& e) {
      fail_data("lexicon line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (lex.size() == 0) fail_data("lexicon has no entries");
  return lex;
}

HomographLexicon HomographLexicon::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_data("cannot open lexicon file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_tsv_text(buf.str());
}

std::string HomographLexicon::to_tsv_text() const {
  std::string out;
  for (const auto& e : entries_) {
    out += e.key;
    out += '\t';
    for (std::size_t i = 0; i < e.labels.size(); ++i) {
      if (i) out += ',';
      out += e.labels[i];
    }
    out += '\n';
  }
  return out;
}

void HomographLexicon::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_data("cannot write lexicon file: " + path);
  out << to_tsv_text();
}

}  // namespace ttsfe
