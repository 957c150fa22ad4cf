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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttsfe/model.hpp"

namespace ttsfe {

// Checkpoint archive: an 8-byte magic, a little-endian uint64 header length,
// a JSON header (config, lexicon, label set, ruleset hash, tensor index),
// then all tensors as contiguous little-endian float64 payload in index
// order. Loading rejects archives whose ruleset hash does not match the
// registry they are opened against.

inline constexpr char kCheckpointMagic[8] = {'T', 'T', 'S', 'F',
                                             'E', 'C', 'K', 'P'};
inline constexpr int kCheckpointFormat = 1;

namespace detail {

inline std::string hash_hex(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

inline nlohmann::ordered_json config_json(const ModelConfig& cfg) {
  nlohmann::ordered_json j;
  j["trunk"] = {{"char_emb_dim", cfg.trunk.char_emb_dim},
                {"conv_layers", cfg.trunk.conv_layers},
                {"conv_channels", cfg.trunk.conv_channels},
                {"conv_kernel", cfg.trunk.conv_kernel},
                {"conv_dropout", cfg.trunk.conv_dropout},
                {"lstm_hidden", cfg.trunk.lstm_hidden},
                {"xformer_hidden", cfg.trunk.xformer_hidden},
                {"attn_heads", cfg.trunk.attn_heads},
                {"xformer_dropout", cfg.trunk.xformer_dropout},
                {"lm_first_layer", cfg.trunk.lm_first_layer},
                {"lm_last_layer", cfg.trunk.lm_last_layer},
                {"lm_dim", cfg.trunk.lm_dim},
                {"seed", cfg.trunk.seed}};
  j["head"] = {{"ff_dim", cfg.head.ff_dim}};
  j["lm_seed"] = cfg.lm_seed;
  return j;
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig cfg;
  const auto& t = j.at("trunk");
  cfg.trunk.char_emb_dim = t.at("char_emb_dim").get<int>();
  cfg.trunk.conv_layers = t.at("conv_layers").get<int>();
  cfg.trunk.conv_channels = t.at("conv_channels").get<int>();
  cfg.trunk.conv_kernel = t.at("conv_kernel").get<int>();
  cfg.trunk.conv_dropout = t.at("conv_dropout").get<double>();
  cfg.trunk.lstm_hidden = t.at("lstm_hidden").get<int>();
  cfg.trunk.xformer_hidden = t.at("xformer_hidden").get<int>();
  cfg.trunk.attn_heads = t.at("attn_heads").get<int>();
  cfg.trunk.xformer_dropout = t.at("xformer_dropout").get<double>();
  cfg.trunk.lm_first_layer = t.at("lm_first_layer").get<int>();
  cfg.trunk.lm_last_layer = t.at("lm_last_layer").get<int>();
  cfg.trunk.lm_dim = t.at("lm_dim").get<int>();
  cfg.trunk.seed = t.at("seed").get<std::uint64_t>();
  cfg.head.ff_dim = j.at("head").at("ff_dim").get<int>();
  cfg.lm_seed = j.at("lm_seed").get<std::uint64_t>();
  return cfg;
}

}  // namespace detail

template <typename Scalar>
void save_checkpoint(const std::string& path,
                     const MultiTaskModel<Scalar>& model) {
  const auto& ps = model.params();
  nlohmann::ordered_json header;
  header["format"] = kCheckpointFormat;
  header["config"] = detail::config_json(model.config());
  header["ruleset_hash"] = detail::hash_hex(model.ruleset_hash());
  header["pos_labels"] = PosTagset::labels();
  nlohmann::ordered_json lex = nlohmann::ordered_json::array();
  for (const HomographEntry& e : model.lexicon().entries())
    lex.push_back({e.key, e.labels});
  header["lexicon"] = std::move(lex);
  nlohmann::ordered_json tensors = nlohmann::ordered_json::array();
  std::uint64_t offset = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& p = ps[i];
    tensors.push_back({{"name", p.name},
                       {"rows", p.value.rows()},
                       {"cols", p.value.cols()},
                       {"offset", offset}});
    offset += static_cast<std::uint64_t>(p.value.size()) * sizeof(double);
  }
  header["tensors"] = std::move(tensors);
  const std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) fail_data("cannot write checkpoint: " + path);
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  const std::uint64_t hlen = header_text.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(header_text.data(),
            static_cast<std::streamsize>(header_text.size()));
  std::vector<double> buf;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& v = ps[i].value;
    buf.resize(static_cast<std::size_t>(v.size()));
    for (Eigen::Index k = 0; k < v.size(); ++k)
      buf[static_cast<std::size_t>(k)] = static_cast<double>(v(k));
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(double)));
  }
  if (!out) fail_data("failed while writing checkpoint: " + path);
}

template <typename Scalar>
MultiTaskModel<Scalar> load_checkpoint(const std::string& path,
                                       const RuleRegistry& rules) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_data("cannot open checkpoint: " + path);
  char magic[sizeof(kCheckpointMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::string(magic, sizeof(magic)) !=
                 std::string(kCheckpointMagic, sizeof(kCheckpointMagic)))
    fail_data("not a checkpoint file: " + path);
  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  if (!in || hlen == 0 || hlen > (1ull << 30))
    fail_data("corrupt checkpoint header: " + path);
  std::string header_text(hlen, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(hlen));
  if (!in) fail_data("truncated checkpoint header: " + path);

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    fail_data(std::string("invalid checkpoint header JSON: ") + e.what());
  }
  try {
    if (header.at("format").get<int>() != kCheckpointFormat)
      fail_data("unsupported checkpoint format version");
    if (header.at("ruleset_hash").get<std::string>() !=
        detail::hash_hex(rules.manifest_hash()))
      fail_config(
          "checkpoint was trained against a different ruleset manifest");
    const auto labels = header.at("pos_labels").get<std::vector<std::string>>();
    const auto& expected = PosTagset::labels();
    if (labels.size() != expected.size() ||
        !std::equal(labels.begin(), labels.end(), expected.begin()))
      fail_data("checkpoint part-of-speech label set mismatch");

    HomographLexicon lexicon;
    for (const auto& item : header.at("lexicon"))
      lexicon.add(item.at(0).get<std::string>(),
                  item.at(1).get<std::vector<std::string>>());
    MultiTaskModel<Scalar> model(detail::config_from_json(header.at("config")),
                                 rules, std::move(lexicon));

    auto& ps = model.params();
    const auto& tensors = header.at("tensors");
    if (tensors.size() != ps.size())
      fail_data("checkpoint tensor count does not match the model");
    const std::streampos payload_base = in.tellg();
    std::vector<double> buf;
    for (const auto& entry : tensors) {
      auto& p = ps.at(entry.at("name").get<std::string>());
      const auto rows = entry.at("rows").get<Eigen::Index>();
      const auto cols = entry.at("cols").get<Eigen::Index>();
      if (rows != p.value.rows() || cols != p.value.cols())
        fail_data("checkpoint tensor shape mismatch for " + p.name);
      in.seekg(payload_base +
               static_cast<std::streamoff>(entry.at("offset").get<std::uint64_t>()));
      buf.resize(static_cast<std::size_t>(rows * cols));
      in.read(reinterpret_cast<char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(double)));
      if (!in) fail_data("truncated checkpoint payload at " + p.name);
      for (Eigen::Index k = 0; k < p.value.size(); ++k)
        p.value(k) = static_cast<Scalar>(buf[static_cast<std::size_t>(k)]);
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail_data(std::string("malformed checkpoint header: ") + e.what());
  }
}

}  // namespace ttsfe
