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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttsfe/checkpoint.hpp"
#include "ttsfe/evalrun.hpp"
#include "ttsfe/presets.hpp"
#include "ttsfe/synth.hpp"

using namespace ttsfe;

namespace {

// Exit codes: 0 success, 2 config error, 3 data error, 4 model error.
int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Data: return 3;
    case ErrorKind::Model: return 4;
  }
  return 4;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (!path.empty()) {
    file.open(path);
    if (!file) fail_data("cannot open input: " + path);
    in = &file;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Routes line output to --out or stdout.
class LineSink {
 public:
  explicit LineSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) fail_data("cannot open output: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

std::vector<Task> parse_tasks(const std::string& spec) {
  std::vector<Task> tasks;
  std::string item;
  std::istringstream in(spec);
  while (std::getline(in, item, ',')) {
    if (item == "tn") tasks.push_back(Task::TN);
    else if (item == "pos") tasks.push_back(Task::POS);
    else if (item == "hd") tasks.push_back(Task::HD);
    else fail_config("unknown task: " + item + " (expected tn, pos, hd)");
  }
  if (tasks.empty()) fail_config("task list is empty");
  for (std::size_t i = 0; i < tasks.size(); ++i)
    for (std::size_t j = i + 1; j < tasks.size(); ++j)
      if (tasks[i] == tasks[j]) fail_config("duplicate task in: " + spec);
  return tasks;
}

struct DatasetPaths {
  std::string tn, pos, hd;
};

// Loads the files backing each requested task; a missing path for a
// requested task is a config error.
Datasets load_datasets(const DatasetPaths& paths, const std::vector<Task>& tasks,
                       const RuleRegistry& rules, const char* role) {
  Datasets out;
  for (Task task : tasks) {
    switch (task) {
      case Task::TN:
        if (paths.tn.empty())
          fail_config(std::string("task tn requested but no --") + role + "tn file given");
        out.tn = load_tn(paths.tn, rules);
        break;
      case Task::POS:
        if (paths.pos.empty())
          fail_config(std::string("task pos requested but no --") + role + "pos file given");
        out.pos = load_pos(paths.pos);
        break;
      case Task::HD:
        if (paths.hd.empty())
          fail_config(std::string("task hd requested but no --") + role + "hd file given");
        out.hd = load_hd(paths.hd).examples;
        break;
    }
  }
  return out;
}

std::vector<Task> tasks_with_paths(const DatasetPaths& paths) {
  std::vector<Task> tasks;
  if (!paths.tn.empty()) tasks.push_back(Task::TN);
  if (!paths.pos.empty()) tasks.push_back(Task::POS);
  if (!paths.hd.empty()) tasks.push_back(Task::HD);
  if (tasks.empty()) fail_config("no dataset files given");
  return tasks;
}

int run_normalize(const std::string& ckpt, const std::string& manifest,
                  const std::string& in, const std::string& out, int beam) {
  const RuleRegistry rules = RuleRegistry::load(manifest);
  const auto model = load_checkpoint<float>(ckpt, rules);
  const auto lm = model.make_context_encoder();
  LineSink sink(out);
  for (const std::string& line : read_lines(in))
    sink.stream() << (blank(line) ? "" : model.normalize(line, rules, lm, beam))
                  << '\n';
  return 0;
}

int run_tag(const std::string& ckpt, const std::string& manifest,
            const std::string& in, const std::string& out) {
  const RuleRegistry rules = RuleRegistry::load(manifest);
  const auto model = load_checkpoint<float>(ckpt, rules);
  const auto lm = model.make_context_encoder();
  LineSink sink(out);
  for (const std::string& line : read_lines(in)) {
    if (blank(line)) {
      sink.stream() << '\n';
      continue;
    }
    const std::vector<std::string> words = split_words(line);
    const std::vector<int> tags = model.tag_pos(line, lm);
    for (std::size_t w = 0; w < words.size(); ++w)
      sink.stream() << (w ? " " : "") << words[w] << '/'
                    << PosTagset::label(tags[w]);
    sink.stream() << '\n';
  }
  return 0;
}

int run_homograph(const std::string& ckpt, const std::string& manifest,
                  const std::string& in, const std::string& out) {
  const RuleRegistry rules = RuleRegistry::load(manifest);
  const auto model = load_checkpoint<float>(ckpt, rules);
  const auto lm = model.make_context_encoder();
  LineSink sink(out);
  bool any_unknown = false;
  for (const HDExample& ex : load_hd(in).examples) {
    if (!model.lexicon().has(ex.homograph)) {
      sink.stream() << "error: unknown homograph: " << ex.homograph << '\n';
      any_unknown = true;
      continue;
    }
    const int idx = model.classify_homograph(
        ex.sentence, static_cast<std::size_t>(ex.start),
        static_cast<std::size_t>(ex.end), ex.homograph, lm);
    sink.stream() << model.lexicon().entry(ex.homograph).labels.at(
                         static_cast<std::size_t>(idx))
                  << '\n';
  }
  return any_unknown ? 3 : 0;
}

int run_train(const std::string& manifest, const std::string& lexicon_path,
              const DatasetPaths& train_paths, const DatasetPaths& val_paths,
              const std::string& out, const std::string& log_path,
              const std::string& tasks_spec, const std::string& size,
              std::uint64_t model_seed, TrainConfig cfg) {
  const RuleRegistry rules = RuleRegistry::load(manifest);
  cfg.tasks = parse_tasks(tasks_spec);
  const Datasets train = load_datasets(train_paths, cfg.tasks, rules, "");
  std::vector<Task> val_tasks;
  for (Task task : cfg.tasks) {
    const bool given = (task == Task::TN && !val_paths.tn.empty()) ||
                       (task == Task::POS && !val_paths.pos.empty()) ||
                       (task == Task::HD && !val_paths.hd.empty());
    if (given) val_tasks.push_back(task);
  }
  const Datasets val = load_datasets(val_paths, val_tasks, rules, "val-");
  MultiTaskModel<float> model(model_config_by_name(size, model_seed), rules,
                              HomographLexicon::load(lexicon_path));
  const auto lm = model.make_context_encoder();
  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path);
    if (!log) fail_data("cannot open log: " + log_path);
  }
  const TrainResult result =
      train_loop(model, lm, rules, train, val, cfg, out,
                 log.is_open() ? &log : nullptr);
  if (result.best_step == 0) save_checkpoint(out, model);
  std::cout << "trained " << cfg.total_iterations << " iterations (tasks "
            << subset_name(cfg.tasks) << "); final loss " << result.final_loss
            << '\n';
  if (result.best_step > 0)
    std::cout << "best validation score " << result.best_score << " at step "
              << result.best_step << '\n';
  std::cout << "saved checkpoint to " << out << '\n';
  return 0;
}

int run_eval(const std::string& ckpt, const std::string& manifest,
             const DatasetPaths& paths, const std::string& tasks_spec,
             int beam, const std::string& out) {
  const RuleRegistry rules = RuleRegistry::load(manifest);
  const auto model = load_checkpoint<float>(ckpt, rules);
  const auto lm = model.make_context_encoder();
  const std::vector<Task> tasks =
      tasks_spec.empty() ? tasks_with_paths(paths) : parse_tasks(tasks_spec);
  const Datasets data = load_datasets(paths, tasks, rules, "");
  LineSink sink(out);
  sink.stream() << evaluate(model, lm, rules, data, tasks, beam).to_text();
  return 0;
}

int run_ablate(const std::string& manifest, const std::string& lexicon_path,
               const DatasetPaths& train_paths, const DatasetPaths& eval_paths,
               int per_task_iters, const std::string& size,
               std::uint64_t model_seed, int beam, const std::string& out,
               TrainConfig base) {
  const RuleRegistry rules = RuleRegistry::load(manifest);
  const std::vector<Task> all = {Task::TN, Task::POS, Task::HD};
  const Datasets train = load_datasets(train_paths, all, rules, "");
  DatasetPaths effective = eval_paths;
  if (effective.tn.empty()) effective.tn = train_paths.tn;
  if (effective.pos.empty()) effective.pos = train_paths.pos;
  if (effective.hd.empty()) effective.hd = train_paths.hd;
  const Datasets eval_data = load_datasets(effective, all, rules, "eval-");
  const auto rows = ablation_grid<float>(
      model_config_by_name(size, model_seed), rules,
      HomographLexicon::load(lexicon_path), train, eval_data, base,
      per_task_iters, beam, &std::cerr);
  LineSink sink(out);
  sink.stream() << ablation_table(rows);
  return 0;
}

int run_validate_balance(const std::string& in) {
  const BalanceReport report = validate_balance(load_hd(in).examples);
  std::cout << "sentences " << report.total << '\n';
  std::cout << "classes " << report.counts.size() << '\n';
  std::cout << "balanced " << (report.is_balanced ? "yes" : "no") << '\n';
  for (const std::string& violation : report.violations)
    std::cout << "violation: " << violation << '\n';
  return report.is_balanced ? 0 : 3;
}

int run_split(const std::string& in, double fraction, std::uint64_t seed,
              const std::string& train_out, const std::string& test_out) {
  std::vector<std::string> warnings;
  const auto [train, test] =
      stratified_split(load_hd(in).examples, fraction, seed, &warnings);
  for (const std::string& warning : warnings)
    std::cerr << "warning: " << warning << '\n';
  write_hd(train_out, train);
  write_hd(test_out, test);
  std::cout << "train " << train.size() << '\n';
  std::cout << "test " << test.size() << '\n';
  return 0;
}

int run_synth(const std::string& out_dir, const std::string& scale) {
  std::filesystem::create_directories(out_dir);
  const auto under = [&](const char* name) { return out_dir + "/" + name; };
  int files = 0;
  if (scale == "desk") {
    RuleRegistry::write_demo_manifest(under("ruleset.json"));
    const RuleRegistry rules = RuleRegistry::load(under("ruleset.json"));
    write_tn(under("tn_desk.jsonl"), desk_tn_corpus(rules));
    write_pos(under("pos_desk.jsonl"), desk_pos_corpus());
    const HomographLexicon lexicon = desk_lexicon();
    lexicon.save(under("lexicon_desk.tsv"));
    write_hd(under("hd_desk.tsv"), desk_hd_corpus(lexicon));
    files = 5;
  } else if (scale == "full") {
    const HomographLexicon lexicon = full_scale_lexicon();
    lexicon.save(under("lexicon_full.tsv"));
    write_hd(under("hd_full.tsv"), full_scale_hd_corpus(lexicon));
    files = 2;
  } else {
    fail_config("unknown scale: " + scale + " (expected desk, full)");
  }
  std::cout << "wrote " << files << " files under " << out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-task text-normalization front end"};
  app.require_subcommand(1);
  int rc = 0;

  std::string ckpt, manifest, lexicon_path, in, out, log_path;
  std::string tasks_spec = "tn,pos,hd";
  std::string size = "desk";
  std::uint64_t model_seed = 11;
  int beam = 8;
  DatasetPaths train_paths, val_paths, eval_paths;
  TrainConfig cfg;
  int per_task_iters = 50;

  auto add_model_flags = [&](CLI::App* sub) {
    sub->add_option("--checkpoint", ckpt, "model checkpoint")->required();
    sub->add_option("--manifest", manifest, "ruleset manifest")->required();
  };
  auto add_data_flags = [&](CLI::App* sub, DatasetPaths& paths, const char* prefix) {
    sub->add_option(std::string("--") + prefix + "tn", paths.tn, "normalization examples");
    sub->add_option(std::string("--") + prefix + "pos", paths.pos, "tagging examples");
    sub->add_option(std::string("--") + prefix + "hd", paths.hd, "homograph examples");
  };
  auto add_train_flags = [&](CLI::App* sub) {
    sub->add_option("--manifest", manifest, "ruleset manifest")->required();
    sub->add_option("--lexicon", lexicon_path, "homograph lexicon")->required();
    add_data_flags(sub, train_paths, "");
    sub->add_option("--size", size, "model size: tiny, desk, full");
    sub->add_option("--model-seed", model_seed, "model init seed");
    sub->add_option("--seed", cfg.seed, "data order seed");
    sub->add_option("--batch-size", cfg.batch_size, "examples per step");
    sub->add_option("--lr", cfg.lr, "initial learning rate");
    sub->add_option("--freeze-stats-after", cfg.freeze_stats_after,
                    "step after which normalization statistics freeze");
  };

  CLI::App* normalize = app.add_subcommand("normalize", "spoken form per input line");
  add_model_flags(normalize);
  normalize->add_option("--in", in, "input file (default stdin)");
  normalize->add_option("--out", out, "output file (default stdout)");
  normalize->add_option("--beam-width", beam, "decoder beam width");
  normalize->callback([&] { rc = run_normalize(ckpt, manifest, in, out, beam); });

  CLI::App* tag = app.add_subcommand("tag", "word/tag pairs per input line");
  add_model_flags(tag);
  tag->add_option("--in", in, "input file (default stdin)");
  tag->add_option("--out", out, "output file (default stdout)");
  tag->callback([&] { rc = run_tag(ckpt, manifest, in, out); });

  CLI::App* homograph = app.add_subcommand("homograph", "pronunciation label per example");
  add_model_flags(homograph);
  homograph->add_option("--in", in, "homograph examples (tsv)")->required();
  homograph->add_option("--out", out, "output file (default stdout)");
  homograph->callback([&] { rc = run_homograph(ckpt, manifest, in, out); });

  CLI::App* train = app.add_subcommand("train", "round-robin multi-task training");
  add_train_flags(train);
  add_data_flags(train, val_paths, "val-");
  train->add_option("--tasks", tasks_spec, "comma-separated task cycle");
  train->add_option("--iterations", cfg.total_iterations, "total steps");
  train->add_option("--validate-every", cfg.validate_every, "validation cadence");
  train->add_option("--out", out, "checkpoint path")->required();
  train->add_option("--log", log_path, "metric history (jsonl)");
  train->callback([&] {
    rc = run_train(manifest, lexicon_path, train_paths, val_paths, out,
                   log_path, tasks_spec, size, model_seed, cfg);
  });

  CLI::App* eval = app.add_subcommand("eval", "metric report for a checkpoint");
  add_model_flags(eval);
  add_data_flags(eval, train_paths, "");
  std::string eval_tasks;
  eval->add_option("--tasks", eval_tasks, "tasks (default: those with files)");
  eval->add_option("--beam-width", beam, "decoder beam width");
  eval->add_option("--out", out, "output file (default stdout)");
  eval->callback([&] {
    rc = run_eval(ckpt, manifest, train_paths, eval_tasks, beam, out);
  });

  CLI::App* ablate = app.add_subcommand("ablate", "train and score every task subset");
  add_train_flags(ablate);
  add_data_flags(ablate, eval_paths, "eval-");
  ablate->add_option("--per-task-iters", per_task_iters, "iterations per task");
  ablate->add_option("--beam-width", beam, "decoder beam width");
  ablate->add_option("--out", out, "output file (default stdout)");
  ablate->callback([&] {
    rc = run_ablate(manifest, lexicon_path, train_paths, eval_paths,
                    per_task_iters, size, model_seed, beam, out, cfg);
  });

  CLI::App* data = app.add_subcommand("data", "dataset utilities");
  data->require_subcommand(1);

  CLI::App* balance = data->add_subcommand("validate-balance", "per-pronunciation counts");
  balance->add_option("--in", in, "homograph examples (tsv)")->required();
  balance->callback([&] { rc = run_validate_balance(in); });

  double fraction = 0.9;
  std::uint64_t split_seed = 1;
  std::string train_out, test_out;
  CLI::App* split = data->add_subcommand("split", "stratified train/test split");
  split->add_option("--in", in, "homograph examples (tsv)")->required();
  split->add_option("--fraction", fraction, "train fraction in (0,1)");
  split->add_option("--seed", split_seed, "shuffle seed");
  split->add_option("--train-out", train_out, "train split path")->required();
  split->add_option("--test-out", test_out, "test split path")->required();
  split->callback([&] { rc = run_split(in, fraction, split_seed, train_out, test_out); });

  std::string scale = "desk";
  CLI::App* synth = data->add_subcommand("synth", "write synthetic fixture files");
  synth->add_option("--out-dir", out, "output directory")->required();
  synth->add_option("--scale", scale, "desk or full");
  synth->callback([&] { rc = run_synth(out, scale); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return rc;
}
