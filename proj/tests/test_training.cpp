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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttsfe/training.hpp"

using namespace ttsfe;

namespace {

const RuleRegistry& demo_registry() {
  static const RuleRegistry reg =
      RuleRegistry::from_json_text(RuleRegistry::demo_manifest_text());
  return reg;
}

HomographLexicon tiny_lexicon() {
  HomographLexicon lex;
  lex.add("bass", {"b ae s", "b ey s"});
  lex.add("bow", {"b aw", "b ow"});
  return lex;
}

ModelConfig tiny_config(std::uint64_t seed = 40) {
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

Datasets desk_data() {
  Datasets d;
  d.tn = {{"pay $3 now", "pay three dollars now", {{0, 0}, {1, 11}, {3, 0}}},
          {"room 7 is far", "room seven is far", {{0, 0}, {1, 2}, {2, 0}, {3, 0}}},
          {"a 5 b", "a five b", {{0, 0}, {1, 2}, {2, 0}}},
          {"add 2 cups", "add two cups", {{0, 0}, {1, 2}, {2, 0}}}};
  d.pos = {{{"dogs", "bark"}, {"noun", "verb"}},
           {{"the", "cat", "sat"}, {"article", "noun", "verb"}},
           {{"she", "ran", "fast"}, {"pronoun", "verb", "adverb"}},
           {{"wow", "!"}, {"interjection", "punctuation"}}};
  d.hd = {{"bass", "b ae s", "the bass swam upstream", 4, 8},
          {"bass", "b ey s", "he tuned the bass drum", 13, 17},
          {"bow", "b aw", "take a bow on stage", 7, 10},
          {"bow", "b ow", "tie the bow with ribbon", 8, 11}};
  return d;
}

std::uint64_t prefix_checksum(const nn::ParamStore<float>& params,
                              const std::string& prefix) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const nn::Parameter<float>& p = params[i];
    if (p.name.rfind(prefix, 0) != 0) continue;
    h = fnv1a64(p.name.data(), p.name.size(), h);
    h = fnv1a64(p.value.data(), sizeof(float) * static_cast<std::size_t>(p.value.size()), h);
  }
  return h;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("./" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("learning rate decays by 0.2 every 16000 steps") {
  TrainConfig cfg;
  CHECK(lr_at_step(cfg, 1) == doctest::Approx(5e-4).epsilon(1e-12));
  CHECK(lr_at_step(cfg, 15999) == doctest::Approx(5e-4).epsilon(1e-12));
  CHECK(lr_at_step(cfg, 16000) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(lr_at_step(cfg, 31999) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(lr_at_step(cfg, 32000) == doctest::Approx(2e-5).epsilon(1e-12));
  CHECK(lr_at_step(cfg, 48000) == doctest::Approx(4e-6).epsilon(1e-12));
  CHECK_THROWS_AS(lr_at_step(cfg, 0), Error);

  SUBCASE("config defaults match the published recipe") {
    CHECK(cfg.lr == 5e-4);
    CHECK(cfg.beta1 == 0.9);
    CHECK(cfg.beta2 == 0.99);
    CHECK(cfg.batch_size == 128);
    CHECK(cfg.decay_factor == 0.2);
    CHECK(cfg.decay_every == 16000);
    REQUIRE(cfg.tasks.size() == 3);
    CHECK(cfg.tasks[0] == Task::TN);
    CHECK(cfg.tasks[1] == Task::POS);
    CHECK(cfg.tasks[2] == Task::HD);
  }
  SUBCASE("invalid configs are rejected") {
    auto broken = [] { return TrainConfig{}; };
    TrainConfig a = broken();
    a.lr = 0;
    CHECK_THROWS_AS(a.validate(), Error);
    TrainConfig b = broken();
    b.beta2 = 1.0;
    CHECK_THROWS_AS(b.validate(), Error);
    TrainConfig c = broken();
    c.tasks = {};
    CHECK_THROWS_AS(c.validate(), Error);
    TrainConfig d = broken();
    d.tasks = {Task::TN, Task::TN};
    CHECK_THROWS_AS(d.validate(), Error);
    TrainConfig e = broken();
    e.batch_size = 0;
    CHECK_THROWS_AS(e.validate(), Error);
    TrainConfig f = broken();
    f.decay_factor = 0.0;
    CHECK_THROWS_AS(f.validate(), Error);
  }
}

TEST_CASE("task losses count labeled positions and stay finite") {
  MultiTaskModel<float> model(tiny_config(), demo_registry(), tiny_lexicon());
  auto lm = model.make_context_encoder();
  const Datasets data = desk_data();

  nn::Tape<float> t1;
  auto tn = tn_loss(t1, model, lm, demo_registry(), data.tn[0]);
  CHECK(tn.labeled == 3);
  CHECK(std::isfinite(t1.val(tn.loss)(0, 0)));
  CHECK(t1.val(tn.loss)(0, 0) > 0.0f);

  nn::Tape<float> t2;
  auto pos = pos_loss(t2, model, lm, data.pos[1]);
  CHECK(pos.labeled == 3);
  CHECK(std::isfinite(t2.val(pos.loss)(0, 0)));

  nn::Tape<float> t3;
  auto hd = hd_loss(t3, model, lm, data.hd[0]);
  CHECK(hd.labeled == 1);
  CHECK(std::isfinite(t3.val(hd.loss)(0, 0)));

  SUBCASE("malformed examples are rejected") {
    nn::Tape<float> t;
    CHECK_THROWS_AS(pos_loss(t, model, lm, POSExample{{"two", "words"}, {"noun"}}),
                    Error);
    CHECK_THROWS_AS(tn_loss(t, model, lm, demo_registry(), TNExample{"x", "x", {}}),
                    Error);
    CHECK_THROWS_AS(hd_loss(t, model, lm,
                            HDExample{"bass", "b ae s", "no fish here", 3, 3}),
                    Error);
  }
}

TEST_CASE("adamw updates only touched parameters with per-parameter bias correction") {
  nn::ParamStore<double> params(7);
  auto& p = params.create("p", 1, 2, nn::ParamStore<double>::Init::One);
  auto& q = params.create("q", 1, 1, nn::ParamStore<double>::Init::One);
  nn::Mat<double> g(1, 2);
  g << 0.5, -2.0;
  p.accumulate(g);

  TrainConfig cfg;
  cfg.lr = 0.1;
  cfg.weight_decay = 0.01;
  adamw_update(params, cfg, 1);

  // First step: corrected moments reduce to g and g^2, so the update is
  // lr * (sign(g) / (1 + eps/|g|) + wd * theta).
  for (int j = 0; j < 2; ++j) {
    const double gj = g(0, j);
    const double m_hat = gj;
    const double v_hat = gj * gj;
    const double expect =
        1.0 - cfg.lr * (m_hat / (std::sqrt(v_hat) + cfg.eps) + cfg.weight_decay * 1.0);
    CHECK(p.value(0, j) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(p.adam_steps == 1);
  CHECK(q.value(0, 0) == 1.0);
  CHECK(q.adam_steps == 0);

  SUBCASE("second step uses stored moments") {
    params.clear_step();
    p.accumulate(g);
    adamw_update(params, cfg, 2);
    const double b1 = cfg.beta1, b2 = cfg.beta2;
    for (int j = 0; j < 2; ++j) {
      const double gj = g(0, j);
      const double m2 = b1 * (1 - b1) * gj + (1 - b1) * gj;
      const double v2 = b2 * (1 - b2) * gj * gj + (1 - b2) * gj * gj;
      const double m_hat = m2 / (1 - b1 * b1);
      const double v_hat = v2 / (1 - b2 * b2);
      double expect = 1.0 - cfg.lr * (gj / (std::abs(gj) + cfg.eps) +
                                      cfg.weight_decay * 1.0);
      expect -= cfg.lr * (m_hat / (std::sqrt(v_hat) + cfg.eps) +
                          cfg.weight_decay * expect);
      CHECK(p.value(0, j) == doctest::Approx(expect).epsilon(1e-10));
    }
    CHECK(p.adam_steps == 2);
  }
  SUBCASE("frozen parameters never move") {
    params.clear_step();
    p.trainable = false;
    p.accumulate(g);
    const double before = p.value(0, 0);
    adamw_update(params, cfg, 2);
    CHECK(p.value(0, 0) == before);
    CHECK(p.adam_steps == 1);
  }
}

TEST_CASE("a training step touches only the trunk and the batch's task head") {
  MultiTaskModel<float> model(tiny_config(), demo_registry(), tiny_lexicon());
  auto lm = model.make_context_encoder();
  const Datasets data = desk_data();
  TrainConfig cfg;
  cfg.batch_size = 2;
  Rng rng(3);

  const std::uint64_t lm_before = lm.checksum();
  const std::uint64_t tn0 = prefix_checksum(model.params(), "heads.tn.");
  const std::uint64_t pos0 = prefix_checksum(model.params(), "heads.pos.");
  const std::uint64_t hd0 = prefix_checksum(model.params(), "heads.hd.");
  const std::uint64_t trunk0 = prefix_checksum(model.params(), "trunk.");

  const double loss1 =
      train_step(model, lm, demo_registry(), Task::TN, data, {0, 1}, cfg, 1, rng);
  CHECK(std::isfinite(loss1));
  CHECK(loss1 > 0.0);
  CHECK(prefix_checksum(model.params(), "heads.tn.") != tn0);
  CHECK(prefix_checksum(model.params(), "trunk.") != trunk0);
  CHECK(prefix_checksum(model.params(), "heads.pos.") == pos0);
  CHECK(prefix_checksum(model.params(), "heads.hd.") == hd0);

  const std::uint64_t tn1 = prefix_checksum(model.params(), "heads.tn.");
  train_step(model, lm, demo_registry(), Task::POS, data, {0, 1}, cfg, 2, rng);
  CHECK(prefix_checksum(model.params(), "heads.pos.") != pos0);
  CHECK(prefix_checksum(model.params(), "heads.tn.") == tn1);
  CHECK(prefix_checksum(model.params(), "heads.hd.") == hd0);

  const std::uint64_t pos2 = prefix_checksum(model.params(), "heads.pos.");
  train_step(model, lm, demo_registry(), Task::HD, data, {0, 1}, cfg, 3, rng);
  CHECK(prefix_checksum(model.params(), "heads.hd.") != hd0);
  CHECK(prefix_checksum(model.params(), "heads.tn.") == tn1);
  CHECK(prefix_checksum(model.params(), "heads.pos.") == pos2);

  // Only the homographs in the batch move; "bow" stayed out of the graph.
  CHECK(model.params().at("heads.hd.per.bow.weight").touched == false);
  CHECK(model.params().at("heads.hd.per.bass.weight").touched == true);

  CHECK(lm.checksum() == lm_before);

  SUBCASE("past the freeze point, normalization statistics stop moving") {
    TrainConfig frozen = cfg;
    frozen.freeze_stats_after = 3;
    const std::uint64_t stats3 =
        prefix_checksum(model.params(), "trunk.conv0.norm.running");
    const std::uint64_t tn3 = prefix_checksum(model.params(), "heads.tn.");
    train_step(model, lm, demo_registry(), Task::TN, data, {0, 1}, frozen, 4, rng);
    CHECK(prefix_checksum(model.params(), "trunk.conv0.norm.running") == stats3);
    CHECK(prefix_checksum(model.params(), "heads.tn.") != tn3);

    const std::uint64_t stats4 =
        prefix_checksum(model.params(), "trunk.conv0.norm.running");
    train_step(model, lm, demo_registry(), Task::TN, data, {0, 1}, frozen, 3, rng);
    CHECK(prefix_checksum(model.params(), "trunk.conv0.norm.running") != stats4);
  }
  SUBCASE("a non-finite loss aborts with step, task, and rate diagnostics") {
    model.params().at("heads.tn.out.bias").value.setConstant(
        std::numeric_limits<float>::infinity());
    try {
      train_step(model, lm, demo_registry(), Task::TN, data, {0}, cfg, 17, rng);
      FAIL("expected non-finite loss to throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Model);
      const std::string msg = e.what();
      CHECK(msg.find("non-finite") != std::string::npos);
      CHECK(msg.find("step 17") != std::string::npos);
      CHECK(msg.find("task tn") != std::string::npos);
      CHECK(msg.find("0.0005") != std::string::npos);
    }
  }
}

TEST_CASE("train loop cycles tasks in order and logs progress") {
  MultiTaskModel<float> model(tiny_config(), demo_registry(), tiny_lexicon());
  auto lm = model.make_context_encoder();
  const Datasets data = desk_data();
  TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.total_iterations = 9;
  cfg.validate_every = 3;
  cfg.seed = 11;

  const TrainResult result = train_loop(model, lm, demo_registry(), data, data, cfg);

  std::vector<std::string> step_tasks;
  int validations = 0;
  for (const std::string& line : result.history) {
    const auto j = nlohmann::json::parse(line);
    if (j.contains("validation")) {
      ++validations;
      CHECK(j["score"].get<double>() >= 0.0);
      CHECK(j["score"].get<double>() <= 1.0);
      CHECK(j.contains("val_tn"));
      CHECK(j.contains("val_pos"));
      CHECK(j.contains("val_hd"));
    } else {
      step_tasks.push_back(j["task"].get<std::string>());
      CHECK(j["lr"].get<double>() == doctest::Approx(5e-4));
      CHECK(std::isfinite(j["loss"].get<double>()));
    }
  }
  CHECK(step_tasks == std::vector<std::string>{"tn", "pos", "hd", "tn", "pos",
                                               "hd", "tn", "pos", "hd"});
  CHECK(validations == 3);
  CHECK(result.best_step > 0);
  CHECK(result.best_score >= 0.0);

  SUBCASE("the loop is deterministic under a fixed seed") {
    MultiTaskModel<float> a(tiny_config(), demo_registry(), tiny_lexicon());
    MultiTaskModel<float> b(tiny_config(), demo_registry(), tiny_lexicon());
    const TrainResult ra = train_loop(a, lm, demo_registry(), data, data, cfg);
    const TrainResult rb = train_loop(b, lm, demo_registry(), data, data, cfg);
    CHECK(ra.history == rb.history);
    CHECK(a.params().checksum() == b.params().checksum());
  }
  SUBCASE("training a task with no examples is rejected") {
    Datasets empty_hd = data;
    empty_hd.hd.clear();
    MultiTaskModel<float> m(tiny_config(), demo_registry(), tiny_lexicon());
    CHECK_THROWS_AS(train_loop(m, lm, demo_registry(), empty_hd, data, cfg), Error);
  }
}

TEST_CASE("a tiny model overfits a handful of examples") {
  MultiTaskModel<float> model(tiny_config(52), demo_registry(), tiny_lexicon());
  auto lm = model.make_context_encoder();
  const Datasets data = desk_data();
  TrainConfig cfg;
  cfg.lr = 0.01;
  cfg.batch_size = 4;
  cfg.total_iterations = 420;
  cfg.validate_every = 60;
  cfg.seed = 5;

  const ValScores before =
      quick_validation(model, lm, demo_registry(), data, cfg.tasks);
  TempFile best("training_best.ckpt");
  const TrainResult result =
      train_loop(model, lm, demo_registry(), data, data, cfg, best.path);

  const ValScores after =
      quick_validation(model, lm, demo_registry(), data, cfg.tasks);
  CHECK(mean_score(after, cfg.tasks) > mean_score(before, cfg.tasks));
  CHECK(after.tn == doctest::Approx(1.0));
  CHECK(after.pos == doctest::Approx(1.0));
  CHECK(after.hd == doctest::Approx(1.0));
  CHECK(result.best_score == doctest::Approx(1.0));

  // The checkpointed best model reproduces its recorded validation score.
  MultiTaskModel<float> loaded = load_checkpoint<float>(best.path, demo_registry());
  auto lm2 = loaded.make_context_encoder();
  const ValScores reloaded =
      quick_validation(loaded, lm2, demo_registry(), data, cfg.tasks);
  CHECK(mean_score(reloaded, cfg.tasks) == doctest::Approx(result.best_score));
}
