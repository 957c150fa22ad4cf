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

#include "ttsfe/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ttsfe/common.hpp"
#include "ttsfe/unicode.hpp"

namespace ttsfe {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Partial {
  std::vector<RuleApplication> apps;
  double score = 0.0;

  // Strict total order: higher score, then fewer applications, then the
  // lexicographically smaller rule id sequence. Suffix-compatible, so pruning
  // by it keeps beam search exact whenever the width covers the ties.
  bool better_than(const Partial& o) const {
    if (score != o.score) return score > o.score;
    if (apps.size() != o.apps.size()) return apps.size() < o.apps.size();
    for (std::size_t i = 0; i < apps.size(); ++i) {
      if (apps[i].rule_id != o.apps[i].rule_id)
        return apps[i].rule_id < o.apps[i].rule_id;
    }
    return false;
  }
};

struct Move {
  int rule_id;
  int span;
  double score;
};

std::vector<std::vector<Move>> moves_per_position(const RuleLogits& scores,
                                                  const TokenSequence& seq,
                                                  const RuleRegistry& registry) {
  std::vector<std::vector<Move>> moves(static_cast<std::size_t>(seq.n()));
  for (int p = 0; p < seq.n(); ++p) {
    for (int r = 0; r < registry.size(); ++r) {
      const auto span = registry.can_parse(r, seq, p);
      if (!span) continue;
      const double s = scores(p, r);
      if (s == kNegInf) continue;
      moves[static_cast<std::size_t>(p)].push_back({r, *span, s});
    }
    if (moves[static_cast<std::size_t>(p)].empty())
      fail_model("no applicable rule survives the mask at token " + std::to_string(p));
  }
  return moves;
}

void fill_words(NormalizationPlan& plan, const TokenSequence& seq,
                const RuleRegistry& registry) {
  for (auto& app : plan.applications) {
    app.words = registry.verbalize(app.rule_id, seq, app.start, app.span);
  }
}

}  // namespace

RuleLogits mask_logits(const RuleLogits& logits, const BoolMat& mask) {
  if (logits.rows() != mask.rows() || logits.cols() != mask.cols())
    fail_model("logits and mask shapes do not match");
  RuleLogits out = logits;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    bool any = false;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      if (mask(i, j)) {
        any = true;
      } else {
        out(i, j) = kNegInf;
      }
    }
    if (!any)
      fail_model("mask row " + std::to_string(i) + " admits no rule");
  }
  return out;
}

RuleLogits masked_log_softmax(const RuleLogits& masked) {
  RuleLogits out = masked;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double mx = out.row(i).maxCoeff();
    if (!std::isfinite(mx))
      fail_model("log-softmax row " + std::to_string(i) + " has no finite entry");
    const double lse = mx + std::log((out.row(i).array() - mx).exp().sum());
    out.row(i).array() -= lse;
  }
  return out;
}

bool tiles_exactly(const NormalizationPlan& plan, int n) {
  int pos = 0;
  for (const auto& app : plan.applications) {
    if (app.start != pos || app.span <= 0) return false;
    pos += app.span;
  }
  return pos == n;
}

NormalizationPlan beam_search(const RuleLogits& masked, const TokenSequence& seq,
                              const RuleRegistry& registry, int beam_width) {
  if (beam_width <= 0) fail_config("beam width must be positive");
  if (masked.rows() != seq.n() || masked.cols() != registry.size())
    fail_model("rule logits shape does not match sequence and ruleset");
  const int n = seq.n();
  NormalizationPlan best;
  if (n == 0) return best;

  const RuleLogits scores = masked_log_softmax(masked);
  const auto moves = moves_per_position(scores, seq, registry);

  std::vector<std::vector<Partial>> beams(static_cast<std::size_t>(n) + 1);
  beams[0].push_back(Partial{});
  const auto prune = [&](std::vector<Partial>& beam) {
    std::sort(beam.begin(), beam.end(),
              [](const Partial& a, const Partial& b) { return a.better_than(b); });
    if (static_cast<int>(beam.size()) > beam_width)
      beam.resize(static_cast<std::size_t>(beam_width));
  };

  for (int p = 0; p < n; ++p) {
    auto& beam = beams[static_cast<std::size_t>(p)];
    prune(beam);
    for (const Partial& part : beam) {
      for (const Move& m : moves[static_cast<std::size_t>(p)]) {
        Partial ext = part;
        ext.apps.push_back({m.rule_id, p, m.span, {}});
        ext.score += m.score;
        beams[static_cast<std::size_t>(p + m.span)].push_back(std::move(ext));
      }
    }
  }

  auto& finals = beams[static_cast<std::size_t>(n)];
  if (finals.empty()) fail_model("no full cover found");
  prune(finals);
  best.applications = std::move(finals.front().apps);
  best.score = finals.front().score;
  fill_words(best, seq, registry);
  return best;
}

NormalizationPlan brute_force_decode(const RuleLogits& masked, const TokenSequence& seq,
                                     const RuleRegistry& registry) {
  if (seq.n() > 12) fail_model("brute-force decoding is guarded to 12 tokens");
  if (masked.rows() != seq.n() || masked.cols() != registry.size())
    fail_model("rule logits shape does not match sequence and ruleset");
  const int n = seq.n();
  NormalizationPlan best;
  if (n == 0) return best;

  const RuleLogits scores = masked_log_softmax(masked);
  const auto moves = moves_per_position(scores, seq, registry);

  bool found = false;
  Partial best_part;
  Partial cur;
  const auto walk = [&](auto&& self, int pos) -> void {
    if (pos == n) {
      if (!found || cur.better_than(best_part)) {
        best_part = cur;
        found = true;
      }
      return;
    }
    for (const Move& m : moves[static_cast<std::size_t>(pos)]) {
      cur.apps.push_back({m.rule_id, pos, m.span, {}});
      const double saved = cur.score;
      cur.score += m.score;
      self(self, pos + m.span);
      cur.score = saved;
      cur.apps.pop_back();
    }
  };
  walk(walk, 0);
  if (!found) fail_model("no full cover found");
  best.applications = std::move(best_part.apps);
  best.score = best_part.score;
  fill_words(best, seq, registry);
  return best;
}

std::string render(const NormalizationPlan& plan, const TokenSequence& seq,
                   const RuleRegistry& registry) {
  if (!tiles_exactly(plan, seq.n()))
    fail_model("plan does not tile the token sequence");
  std::vector<std::string> out;
  int prev_plain_word = -1;
  for (const auto& app : plan.applications) {
    const auto words = registry.verbalize(app.rule_id, seq, app.start, app.span);
    const bool plain =
        registry.rule(app.rule_id).semiotic_class == SemioticClass::Plain;
    const int word =
        plain ? seq.tokens[static_cast<std::size_t>(app.start)].word_index : -1;
    if (plain && !out.empty() && word == prev_plain_word) {
      out.back() += words[0];
    } else {
      out.insert(out.end(), words.begin(), words.end());
    }
    prev_plain_word = plain ? word : -1;
  }
  std::string joined;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) joined += ' ';
    joined += out[i];
  }
  return ascii_lower(joined);
}

}  // namespace ttsfe
