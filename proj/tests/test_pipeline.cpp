#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "lexattr/error.hpp"
#include "lexattr/io.hpp"
#include "lexattr/pipeline.hpp"

using namespace lexattr;
namespace fs = std::filesystem;

namespace {

RunConfig fast_synthetic_config(const fs::path& out_dir) {
  RunConfig config;
  config.task = "synthetic";
  config.output_dir = out_dir.string();
  config.synthetic.train_size = 60;
  config.synthetic.test_size = 24;
  config.model.epochs = 4;
  config.model.embed_dim = 8;
  config.model.hidden_dim = 12;
  config.steps = 10;
  config.top_k = 20;
  config.report_max_examples = 5;
  config.stopword_path =
      (fs::path(LEXATTR_SOURCE_DIR) / "data" / "stopwords_en.txt").string();
  config.phrase_path =
      (fs::path(LEXATTR_SOURCE_DIR) / "data" / "dunn_phrases.txt").string();
  return config;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("run_config validation fails before any stage runs") {
  RunConfig config;
  config.task = "overrule";
  config.output_dir = (fs::temp_directory_path() / "lexattr_cfg_out").string();
  config.train_path = "/nonexistent/train.tsv";
  config.test_path = "/nonexistent/test.tsv";
  config.vocab_path = "/nonexistent/vocab.txt";
  CHECK_THROWS_AS(run_pipeline(config), ConfigError);
  CHECK(!fs::exists(config.output_dir));

  RunConfig bad_task;
  bad_task.task = "unknown";
  bad_task.output_dir = "x";
  CHECK_THROWS_AS(bad_task.validate(), ConfigError);
}

TEST_CASE("load_run_config parses the documented keys and rejects unknown ones") {
  fs::path path = fs::temp_directory_path() / "lexattr_config.json";
  write_file(path, R"({
    "task": "synthetic",
    "model_name": "toy",
    "paths": {"output_dir": "/tmp/lexattr_cfg_demo"},
    "model": {"embed_dim": 16, "epochs": 2, "seed": 9},
    "attribution": {"steps": 25},
    "analytics": {"top_k": 10, "windows": [[0.1, 0.25]]},
    "tokenizer": {"max_tokens": 128},
    "synthetic": {"train_size": 50, "test_size": 20, "seed": 3},
    "workers": 2
  })");
  RunConfig config = load_run_config(path);
  CHECK(config.task == "synthetic");
  CHECK(config.model_name == "toy");
  CHECK(config.model.embed_dim == 16);
  CHECK(config.model.seed == 9);
  CHECK(config.steps == 25);
  CHECK(config.top_k == 10);
  REQUIRE(config.windows.size() == 1);
  CHECK(config.windows[0].first == 0.1);
  CHECK(config.max_tokens == 128);
  CHECK(config.synthetic.train_size == 50);
  CHECK(config.workers == 2);

  write_file(path, R"({"task": "synthetic", "tpyo": 1})");
  CHECK_THROWS_AS(load_run_config(path), ConfigError);
  fs::remove(path);
}

TEST_CASE("synthetic pipeline produces the full artifact set") {
  fs::path out = fresh_dir("lexattr_pipe_artifacts");
  RunConfig config = fast_synthetic_config(out);
  Manifest manifest = run_pipeline(config);

  std::vector<std::string> expected = {
      "analytics/attribution_histograms.tsv",
      "analytics/attribution_histograms_w0.tsv",
      "analytics/attribution_histograms_w1.tsv",
      "analytics/correctness_sets.tsv",
      "analytics/distribution_stats.tsv",
      "analytics/phrase_counts.tsv",
      "analytics/phrase_hits.tsv",
      "analytics/scatter.tsv",
      "analytics/stopword_split.tsv",
      "analytics/token_coverage.tsv",
      "analytics/token_frequencies.tsv",
      "analytics/word_frequencies.tsv",
      "attribution/records.tsv",
      "attribution/token_scores.tsv",
      "dataset/test.tsv",
      "dataset/train.tsv",
      "dataset/vocab.txt",
      "metrics/metrics.json",
      "model/checkpoint.json",
      "report/report.html",
  };
  REQUIRE(manifest.files.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(manifest.files[i].path == expected[i]);
    CHECK(fs::exists(out / expected[i]));
    CHECK(manifest.files[i].sha256 == sha256_file(out / expected[i]));
  }
  CHECK(fs::exists(out / "manifest.json"));

  // Attribution records cover the whole test split.
  auto records = records_from_files(out / "attribution" / "records.tsv",
                                    out / "attribution" / "token_scores.tsv");
  CHECK(records.size() == config.synthetic.test_size);

  auto metrics = nlohmann::json::parse(read_file(out / "metrics" / "metrics.json"));
  CHECK(metrics.at("train_examples") == 60);
  CHECK(metrics.at("test_examples") == 24);
  CHECK(metrics.at("attribution").at("records") == 24);
  CHECK(metrics.at("loss_trace").size() == 4);

  fs::remove_all(out);
}

TEST_CASE("pipeline reruns are byte-identical apart from the timestamp") {
  fs::path out_a = fresh_dir("lexattr_pipe_rerun_a");
  fs::path out_b = fresh_dir("lexattr_pipe_rerun_b");
  RunConfig config = fast_synthetic_config(out_a);
  Manifest a = run_pipeline(config);
  config.output_dir = out_b.string();
  Manifest b = run_pipeline(config);

  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    CHECK(a.files[i].path == b.files[i].path);
    CHECK(a.files[i].sha256 == b.files[i].sha256);
    CHECK(a.files[i].bytes == b.files[i].bytes);
  }

  // Worker count must not change any artifact either.
  fs::path out_c = fresh_dir("lexattr_pipe_rerun_c");
  config.output_dir = out_c.string();
  config.workers = 4;
  Manifest c = run_pipeline(config);
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    CHECK(a.files[i].sha256 == c.files[i].sha256);
  }

  fs::remove_all(out_a);
  fs::remove_all(out_b);
  fs::remove_all(out_c);
}

TEST_CASE("manifest json round trips") {
  Manifest manifest;
  manifest.created_at = "2026-01-01T00:00:00Z";
  manifest.files = {{"a/b.tsv", "deadbeef", 12}, {"c.json", "cafe", 0}};
  Manifest loaded = manifest_from_json(manifest_to_json(manifest));
  CHECK(loaded.created_at == manifest.created_at);
  REQUIRE(loaded.files.size() == 2);
  CHECK(loaded.files[0].path == "a/b.tsv");
  CHECK(loaded.files[0].sha256 == "deadbeef");
  CHECK(loaded.files[1].bytes == 0);
}

TEST_CASE("overrule task runs end to end from files") {
  fs::path dir = fresh_dir("lexattr_pipe_overrule");
  fs::create_directories(dir);
  std::string vocab =
      "[PAD]\n[UNK]\n[CLS]\n[SEP]\nthe\ncourt\nwe\noverrule\naffirm\n.\n";
  write_file(dir / "vocab.txt", vocab);
  std::string train = "label\ttext\n";
  for (int i = 0; i < 16; ++i) {
    train += (i % 2) ? "1\twe overrule the court .\n"
                     : "0\twe affirm the court .\n";
  }
  write_file(dir / "train.tsv", train);
  write_file(dir / "test.tsv",
             "label\ttext\n1\twe overrule .\n0\twe affirm .\n");

  RunConfig config;
  config.task = "overrule";
  config.train_path = (dir / "train.tsv").string();
  config.test_path = (dir / "test.tsv").string();
  config.vocab_path = (dir / "vocab.txt").string();
  config.output_dir = (dir / "out").string();
  config.model.epochs = 60;
  config.model.learning_rate = 1.0;
  config.model.embed_dim = 8;
  config.model.hidden_dim = 8;
  config.steps = 10;
  Manifest manifest = run_pipeline(config);
  CHECK(!manifest.files.empty());

  auto metrics =
      nlohmann::json::parse(read_file(dir / "out" / "metrics" / "metrics.json"));
  CHECK(metrics.at("test_accuracy") == 1.0);
  CHECK(metrics.at("test_f1") == 1.0);
  fs::remove_all(dir);
}

TEST_CASE("casehold task trains the shared scorer end to end") {
  fs::path dir = fresh_dir("lexattr_pipe_casehold");
  fs::create_directories(dir);
  write_file(dir / "vocab.txt",
             "[PAD]\n[UNK]\n[CLS]\n[SEP]\nthe\ncourt\nheld\nright\n"
             "wrong\nanswer\n.\n");

  // Correct option carries "right", distractors carry "wrong".
  std::vector<Example> examples;
  for (int i = 0; i < 10; ++i) {
    Example e;
    e.kind = ExampleKind::kMultipleChoice;
    e.context = "the court held .";
    int answer = i % 5;
    for (int j = 0; j < 5; ++j) {
      e.options[j] = (j == answer) ? "right answer ." : "wrong answer .";
    }
    e.label = answer;
    examples.push_back(e);
  }
  write_file(dir / "train.tsv", casehold_to_tsv(examples));
  write_file(dir / "test.tsv",
             casehold_to_tsv({examples.begin(), examples.begin() + 5}));

  RunConfig config;
  config.task = "casehold";
  config.train_path = (dir / "train.tsv").string();
  config.test_path = (dir / "test.tsv").string();
  config.vocab_path = (dir / "vocab.txt").string();
  config.output_dir = (dir / "out").string();
  config.model.epochs = 30;
  config.model.embed_dim = 8;
  config.model.hidden_dim = 8;
  config.model.learning_rate = 0.8;
  config.steps = 10;
  config.report_max_examples = 2;
  Manifest manifest = run_pipeline(config);
  CHECK(!manifest.files.empty());

  auto metrics =
      nlohmann::json::parse(read_file(dir / "out" / "metrics" / "metrics.json"));
  CHECK(metrics.at("test_accuracy") == 1.0);
  CHECK(!metrics.contains("test_f1"));  // f1 is binary-only
  fs::remove_all(dir);
}
