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
#include <string>

#include "ttsfe/model.hpp"

namespace ttsfe {

// Named model sizes shared by the command-line tool and the acceptance
// runner. "tiny" is for fast property tests, "desk" fits overnight laptop
// experiments, "full" matches the production-scale configuration.

inline ModelConfig tiny_model_config(std::uint64_t seed = 40) {
  ModelConfig cfg;
  cfg.trunk.char_emb_dim = 4;
  cfg.trunk.conv_channels = 6;
  cfg.trunk.conv_kernel = 3;
  cfg.trunk.conv_dropout = 0.0;
  cfg.trunk.lstm_hidden = 4;
  cfg.trunk.xformer_hidden = 8;
  cfg.trunk.attn_heads = 2;
  cfg.trunk.xformer_dropout = 0.0;
  cfg.trunk.lm_last_layer = 3;
  cfg.trunk.lm_dim = 8;
  cfg.trunk.seed = seed;
  cfg.head.ff_dim = 8;
  cfg.lm_seed = 901;
  return cfg;
}

inline ModelConfig desk_model_config(std::uint64_t seed = 11) {
  ModelConfig cfg;
  cfg.trunk.char_emb_dim = 12;
  cfg.trunk.conv_channels = 20;
  cfg.trunk.conv_kernel = 5;
  cfg.trunk.conv_dropout = 0.0;
  cfg.trunk.lstm_hidden = 16;
  cfg.trunk.xformer_hidden = 32;
  cfg.trunk.attn_heads = 4;
  cfg.trunk.xformer_dropout = 0.0;
  cfg.trunk.lm_last_layer = 4;
  cfg.trunk.lm_dim = 32;
  cfg.trunk.seed = seed;
  cfg.head.ff_dim = 32;
  return cfg;
}

inline ModelConfig full_model_config(std::uint64_t seed = 0) {
  ModelConfig cfg;
  cfg.trunk.seed = seed;
  return cfg;
}

inline ModelConfig model_config_by_name(const std::string& size,
                                        std::uint64_t seed) {
  if (size == "tiny") return tiny_model_config(seed);
  if (size == "desk") return desk_model_config(seed);
  if (size == "full") return full_model_config(seed);
  fail_config("unknown model size: " + size + " (expected tiny, desk, full)");
}

}  // namespace ttsfe
