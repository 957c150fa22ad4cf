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

#include "ttsfe/data.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ttsfe/common.hpp"
#include "ttsfe/decoder.hpp"
#include "ttsfe/lexicon.hpp"
#include "ttsfe/tokenizer.hpp"
#include "ttsfe/unicode.hpp"

namespace ttsfe {

namespace {

constexpr const char* kHdHeader = "homograph\twordid\tsentence\tstart\tend";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_data("cannot open: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t from = 0;
  while (from <= text.size()) {
    const std::size_t at = text.find('\n', from);
    if (at == std::string::npos) {
      if (from < text.size()) lines.push_back(text.substr(from));
      break;
    }
    lines.push_back(text.substr(from, at - from));
    from = at + 1;
  }
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t from = 0;
  while (true) {
    const std::size_t at = line.find('\t', from);
    if (at == std::string::npos) {
      fields.push_back(line.substr(from));
      return fields;
    }
    fields.push_back(line.substr(from, at - from));
    from = at + 1;
  }
}

int parse_int_field(const std::string& text, std::size_t line_no,
                    const char* what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != text.size() || text.empty())
    fail_data("line " + std::to_string(line_no) + ": " + what +
              " is not an integer: \"" + text + "\"");
  return value;
}

bool span_matches(const std::string& slice, const std::string& homograph) {
  return ascii_lower(slice) == ascii_lower(homograph);
}

// Scalar index for each byte offset that starts a scalar, plus the end.
std::map<int, int> byte_to_scalar_index(const std::string& text) {
  std::map<int, int> at;
  const std::vector<char32_t> scalars = decode_utf8(text);
  std::string rebuilt;
  int scalar = 0;
  for (char32_t c : scalars) {
    at[static_cast<int>(rebuilt.size())] = scalar++;
    rebuilt += encode_utf8(c);
  }
  at[static_cast<int>(rebuilt.size())] = scalar;
  // Offsets into a malformed original cannot be mapped through re-encoding.
  if (rebuilt != text) at.clear();
  return at;
}

void require_clean_field(const std::string& value, const char* what) {
  if (value.find('\t') != std::string::npos ||
      value.find('\n') != std::string::npos)
    fail_data(std::string(what) + " contains a tab or newline: \"" + value + "\"");
}

}  // namespace

HdLoadResult load_hd(const std::string& path) {
  const std::vector<std::string> lines = split_lines(read_file(path));
  if (lines.empty()) fail_data("empty homograph data file: " + path);
  if (lines[0] != kHdHeader)
    fail_data("line 1: expected header \"" + std::string(kHdHeader) + "\"");

  struct Row {
    HDExample example;
    std::size_t line_no = 0;
  };
  std::vector<Row> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const std::vector<std::string> fields = split_tabs(lines[i]);
    if (fields.size() != 5)
      fail_data("line " + std::to_string(line_no) + ": expected 5 columns, got " +
                std::to_string(fields.size()));
    Row row;
    row.line_no = line_no;
    row.example.homograph = fields[0];
    row.example.label = fields[1];
    row.example.sentence = fields[2];
    row.example.start = parse_int_field(fields[3], line_no, "start offset");
    row.example.end = parse_int_field(fields[4], line_no, "end offset");
    if (row.example.homograph.empty())
      fail_data("line " + std::to_string(line_no) + ": empty homograph");
    if (row.example.label.empty())
      fail_data("line " + std::to_string(line_no) + ": empty wordid");
    if (row.example.start < 0 || row.example.end <= row.example.start)
      fail_data("line " + std::to_string(line_no) + ": invalid span [" +
                std::to_string(row.example.start) + ", " +
                std::to_string(row.example.end) + ")");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail_data("no homograph examples in: " + path);

  // The file either counts offsets in unicode scalars or in UTF-8 bytes; every
  // row must agree. Scalars win when both fit (pure-ASCII files).
  bool all_scalars = true;
  bool all_bytes = true;
  std::size_t first_bad_line = 0;
  for (const Row& row : rows) {
    const HDExample& e = row.example;
    const int n = static_cast<int>(scalar_length(e.sentence));
    const bool scalar_ok =
        e.end <= n &&
        span_matches(slice_scalars(e.sentence,
                                   static_cast<std::size_t>(e.start),
                                   static_cast<std::size_t>(e.end)),
                     e.homograph);
    const bool byte_ok =
        e.end <= static_cast<int>(e.sentence.size()) &&
        span_matches(e.sentence.substr(static_cast<std::size_t>(e.start),
                                       static_cast<std::size_t>(e.end - e.start)),
                     e.homograph);
    all_scalars = all_scalars && scalar_ok;
    all_bytes = all_bytes && byte_ok;
    if (!scalar_ok && !byte_ok && first_bad_line == 0)
      first_bad_line = row.line_no;
  }

  HdLoadResult result;
  if (all_scalars) {
    result.offsets = OffsetUnit::Scalars;
  } else if (all_bytes) {
    result.offsets = OffsetUnit::Bytes;
  } else {
    if (first_bad_line == 0) first_bad_line = rows.front().line_no;
    fail_data("line " + std::to_string(first_bad_line) +
              ": span does not match the homograph under scalar or byte offsets");
  }

  result.examples.reserve(rows.size());
  for (Row& row : rows) {
    HDExample e = std::move(row.example);
    if (result.offsets == OffsetUnit::Bytes) {
      const std::map<int, int> to_scalar = byte_to_scalar_index(e.sentence);
      const auto s = to_scalar.find(e.start);
      const auto t = to_scalar.find(e.end);
      if (s == to_scalar.end() || t == to_scalar.end())
        fail_data("line " + std::to_string(row.line_no) +
                  ": byte offset does not land on a character boundary");
      e.start = s->second;
      e.end = t->second;
    }
    result.examples.push_back(std::move(e));
  }
  return result;
}

void write_hd(const std::string& path, const std::vector<HDExample>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_data("cannot write: " + path);
  out << kHdHeader << '\n';
  for (const HDExample& e : examples) {
    require_clean_field(e.homograph, "homograph");
    require_clean_field(e.label, "wordid");
    require_clean_field(e.sentence, "sentence");
    out << e.homograph << '\t' << e.label << '\t' << e.sentence << '\t'
        << e.start << '\t' << e.end << '\n';
  }
}

BalanceReport validate_balance(const std::vector<HDExample>& examples) {
  BalanceReport report;
  report.total = static_cast<int>(examples.size());
  for (const HDExample& e : examples)
    report.counts[{e.homograph, e.label}] += 1;

  std::map<std::string, std::vector<std::pair<std::string, int>>> by_homograph;
  for (const auto& [key, count] : report.counts)
    by_homograph[key.first].emplace_back(key.second, count);
  for (const auto& [homograph, labels] : by_homograph) {
    int lo = labels.front().second;
    int hi = lo;
    for (const auto& [label, count] : labels) {
      lo = std::min(lo, count);
      hi = std::max(hi, count);
    }
    if (lo == hi) continue;
    std::ostringstream msg;
    msg << homograph << ": uneven coverage (";
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i > 0) msg << ", ";
      msg << labels[i].first << "=" << labels[i].second;
    }
    msg << ")";
    report.violations.push_back(msg.str());
  }
  report.is_balanced = report.violations.empty();
  return report;
}

std::pair<std::vector<HDExample>, std::vector<HDExample>> stratified_split(
    const std::vector<HDExample>& examples, double fraction, std::uint64_t seed,
    std::vector<std::string>* warnings) {
  if (!(fraction > 0.0 && fraction < 1.0))
    fail_config("split fraction must lie strictly between 0 and 1");
  std::map<std::pair<std::string, std::string>, std::vector<int>> groups;
  for (std::size_t i = 0; i < examples.size(); ++i)
    groups[{examples[i].homograph, examples[i].label}].push_back(
        static_cast<int>(i));

  Rng rng(seed);
  std::vector<HDExample> train, test;
  for (auto& [key, indices] : groups) {
    rng.shuffle(indices);
    const int n = static_cast<int>(indices.size());
    const int n_train = static_cast<int>(fraction * n + 0.5);
    if ((n_train == 0 || n_train == n) && warnings) {
      std::ostringstream msg;
      msg << key.first << " / " << key.second << ": only " << n
          << " example(s); one side of the split is empty";
      warnings->push_back(msg.str());
    }
    for (int i = 0; i < n; ++i)
      (i < n_train ? train : test)
          .push_back(examples[static_cast<std::size_t>(indices[static_cast<std::size_t>(i)])]);
  }
  return {std::move(train), std::move(test)};
}

std::vector<TNExample> load_tn(const std::string& path,
                               const RuleRegistry& registry) {
  const std::vector<std::string> lines = split_lines(read_file(path));
  std::vector<TNExample> examples;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::exception& e) {
      fail_data("line " + std::to_string(line_no) + ": " + e.what());
    }
    TNExample example;
    try {
      if (j.at("schema").get<int>() != 1)
        fail_data("line " + std::to_string(line_no) +
                  ": unsupported schema version");
      example.text = j.at("text").get<std::string>();
      example.norm = j.at("norm").get<std::string>();
      for (const auto& pair : j.at("rules")) {
        if (!pair.is_array() || pair.size() != 2)
          fail_data("line " + std::to_string(line_no) +
                    ": rule applications must be [start, rule] pairs");
        example.rules.emplace_back(pair[0].get<int>(), pair[1].get<int>());
      }
    } catch (const nlohmann::json::exception& e) {
      fail_data("line " + std::to_string(line_no) + ": " + e.what());
    }

    const TokenSequence seq = tokenize(example.text);
    if (seq.empty())
      fail_data("line " + std::to_string(line_no) + ": text has no tokens");
    NormalizationPlan plan;
    int next = 0;
    for (const auto& [start, rule_id] : example.rules) {
      if (rule_id < 0 || rule_id >= registry.size())
        fail_data("line " + std::to_string(line_no) + ": unknown rule id " +
                  std::to_string(rule_id));
      if (start != next)
        fail_data("line " + std::to_string(line_no) +
                  ": rule applications do not tile the tokens (expected start " +
                  std::to_string(next) + ", got " + std::to_string(start) + ")");
      const std::optional<int> span = registry.can_parse(rule_id, seq, start);
      if (!span)
        fail_data("line " + std::to_string(line_no) + ": rule " +
                  registry.rule(rule_id).name + " does not apply at token " +
                  std::to_string(start));
      RuleApplication app;
      app.rule_id = rule_id;
      app.start = start;
      app.span = *span;
      app.words = registry.verbalize(rule_id, seq, start, *span);
      plan.applications.push_back(std::move(app));
      next += *span;
    }
    if (next != seq.n())
      fail_data("line " + std::to_string(line_no) +
                ": rule applications cover " + std::to_string(next) + " of " +
                std::to_string(seq.n()) + " tokens");
    const std::string rendered = render(plan, seq, registry);
    if (rendered != example.norm)
      fail_data("line " + std::to_string(line_no) +
                ": rules render to \"" + rendered + "\" but norm says \"" +
                example.norm + "\"");
    examples.push_back(std::move(example));
  }
  if (examples.empty()) fail_data("no normalization examples in: " + path);
  return examples;
}

std::string tn_jsonl(const std::vector<TNExample>& examples) {
  std::string out;
  for (const auto& e : examples) {
    nlohmann::ordered_json line = {{"schema", 1},
                                   {"text", e.text},
                                   {"norm", e.norm},
                                   {"rules", e.rules}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

void write_tn(const std::string& path, const std::vector<TNExample>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_data("cannot write: " + path);
  out << tn_jsonl(examples);
}

std::vector<POSExample> load_pos(const std::string& path) {
  const std::vector<std::string> lines = split_lines(read_file(path));
  std::vector<POSExample> examples;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::exception& e) {
      fail_data("line " + std::to_string(line_no) + ": " + e.what());
    }
    POSExample example;
    try {
      if (j.at("schema").get<int>() != 1)
        fail_data("line " + std::to_string(line_no) +
                  ": unsupported schema version");
      example.words = j.at("words").get<std::vector<std::string>>();
      example.tags = j.at("tags").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      fail_data("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (example.words.empty() || example.words.size() != example.tags.size())
      fail_data("line " + std::to_string(line_no) +
                ": need one tag per word and at least one word");
    for (const std::string& word : example.words)
      if (word.empty() || word.find_first_of(" \t\n") != std::string::npos)
        fail_data("line " + std::to_string(line_no) +
                  ": words must be non-empty and contain no whitespace");
    for (const std::string& tag : example.tags)
      if (!PosTagset::contains(tag))
        fail_data("line " + std::to_string(line_no) + ": unknown tag \"" + tag +
                  "\"");
    examples.push_back(std::move(example));
  }
  if (examples.empty()) fail_data("no tagging examples in: " + path);
  return examples;
}

std::string pos_jsonl(const std::vector<POSExample>& examples) {
  std::string out;
  for (const auto& e : examples) {
    nlohmann::ordered_json line = {
        {"schema", 1}, {"words", e.words}, {"tags", e.tags}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

void write_pos(const std::string& path, const std::vector<POSExample>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_data("cannot write: " + path);
  out << pos_jsonl(examples);
}

}  // namespace ttsfe
