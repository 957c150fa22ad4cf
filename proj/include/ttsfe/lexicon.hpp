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

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ttsfe/common.hpp"

namespace ttsfe {

// The fixed 15-way part-of-speech label set, in stable index order.
class PosTagset {
 public:
  static constexpr int kSize = 15;
  static const std::array<std::string, kSize>& labels();
  // Index of a label; fails on unknown labels.
  static int index(const std::string& label);
  static const std::string& label(int index);
  static bool contains(const std::string& label);
};

// One homograph with its ordered pronunciation labels. Label order defines
// the logit index order of that homograph's classification head, so it must
// stay stable across saves and loads.
struct HomographEntry {
  std::string key;
  std::vector<std::string> labels;
};

// Map from lowercased homograph strings to their pronunciation labels.
// Serialized as one line per entry: key, a tab, then comma-separated labels.
class HomographLexicon {
 public:
  void add(const std::string& key, std::vector<std::string> labels);

  bool has(const std::string& key) const;
  const HomographEntry& entry(const std::string& key) const;
  // Position of `label` within the entry's ordered label list.
  int label_index(const std::string& key, const std::string& label) const;

  const std::vector<HomographEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t total_labels() const;

  static HomographLexicon from_tsv_text(const std::string& text);
  static HomographLexicon load(const std::string& path);
  std::string to_tsv_text() const;
  void save(const std::string& path) const;

 private:
  std::vector<HomographEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace ttsfe
