// lexattr: tokenize legal text, train/evaluate the reference classifier,
// compute integrated-gradients attributions, and export corpus analytics.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lexattr/analytics.hpp"
#include "lexattr/attribution.hpp"
#include "lexattr/dataset.hpp"
#include "lexattr/error.hpp"
#include "lexattr/io.hpp"
#include "lexattr/model.hpp"
#include "lexattr/phrase.hpp"
#include "lexattr/pipeline.hpp"
#include "lexattr/report.hpp"

namespace {

using namespace lexattr;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitStageFailure = 2;

std::vector<Example> ingest_task(const std::string& task,
                                 const std::filesystem::path& path) {
  if (task == "overrule" || task == "synthetic") return ingest_overrule(path);
  if (task == "casehold") return ingest_casehold(path);
  throw ConfigError("unknown task '" + task + "'");
}

// Input paths are validated up front so a typo exits with the validation
// code, not a stage failure.
std::string validated(const std::string& path, const std::string& what) {
  if (path.empty() || !std::filesystem::exists(path)) {
    throw ConfigError(what + " path does not exist: " + path);
  }
  return path;
}

// "name=path" pairs for --vocab style repeated flags.
std::pair<std::string, std::string> parse_named_path(const std::string& arg) {
  auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
    throw ConfigError("expected name=path, got '" + arg + "'");
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

struct CommonModelArgs {
  std::string task = "overrule";
  std::string vocab_path;
  std::string data_path;
  std::size_t max_tokens = 512;
};

ModelConfig model_config_for(const std::string& task, const Vocabulary& vocab,
                             const ModelConfig& base) {
  ModelConfig config = base;
  config.vocab_size = static_cast<int>(vocab.size());
  config.num_classes = task == "casehold" ? 1 : 2;
  config.pad_id = vocab.pad_id().value_or(-1);
  return config;
}

int cmd_tokenize(const std::string& vocab_path, const std::string& text,
                 const std::string& input_path, bool add_specials) {
  Vocabulary vocab = load_vocab(validated(vocab_path, "vocab"));
  std::vector<std::string> texts;
  if (!input_path.empty()) {
    texts = read_lines(validated(input_path, "input"));
  } else {
    texts.push_back(text);
  }
  std::printf("line\ttoken_index\ttoken_id\ttoken\tword_index\tis_special\n");
  for (std::size_t line = 0; line < texts.size(); ++line) {
    TokenizedText tok = tokenize(texts[line], vocab, add_specials);
    for (std::size_t i = 0; i < tok.size(); ++i) {
      std::printf("%zu\t%zu\t%d\t%s\t%d\t%d\n", line, i, tok.token_ids[i],
                  tok.token_strings[i].c_str(), tok.word_index[i],
                  static_cast<int>(tok.is_special[i]));
    }
  }
  return kExitOk;
}

int cmd_vocab_analyze(const std::vector<std::string>& named,
                      const std::string& out_path) {
  std::vector<Vocabulary> storage;
  std::vector<std::pair<std::string, const Vocabulary*>> vocabs;
  storage.reserve(named.size());
  for (const std::string& arg : named) {
    auto [name, path] = parse_named_path(arg);
    storage.push_back(load_vocab(validated(path, "vocab '" + name + "'")));
    vocabs.emplace_back(name, &storage.back());
  }
  PartitionReport report = vocab_overlap(vocabs);
  report.check_conservation();
  std::printf("vocabularies: %zu, union: %llu tokens\n", vocabs.size(),
              static_cast<unsigned long long>(report.universe_size));
  for (const auto& [mask, size] : report.cell_sizes) {
    std::printf("  %-40s %llu\n", report.cell_label(mask).c_str(),
                static_cast<unsigned long long>(size));
  }
  if (!out_path.empty()) {
    write_file(out_path, partition_to_tsv(report, true));
    std::printf("wrote %s\n", out_path.c_str());
  }
  return kExitOk;
}

std::vector<TokenizedText> corpus_for(const std::string& task,
                                      const std::vector<Example>& examples,
                                      const Vocabulary& vocab) {
  std::vector<TokenizedText> corpus;
  for (const Example& example : examples) {
    if (task == "casehold") {
      corpus.push_back(tokenize(example.context, vocab, false));
      for (const std::string& option : example.options) {
        corpus.push_back(tokenize(option, vocab, false));
      }
    } else {
      corpus.push_back(tokenize(example.text, vocab, false));
    }
  }
  return corpus;
}

int cmd_freq(const CommonModelArgs& args, const std::vector<std::string>& extra_data,
             std::size_t top, const std::string& mode, const std::string& out_path) {
  Vocabulary vocab = load_vocab(validated(args.vocab_path, "vocab"));
  std::vector<Example> examples =
      ingest_task(args.task, validated(args.data_path, "data"));
  for (const std::string& extra : extra_data) {
    std::vector<Example> more = ingest_task(args.task, validated(extra, "data"));
    examples.insert(examples.end(), more.begin(), more.end());
  }
  std::vector<TokenizedText> corpus = corpus_for(args.task, examples, vocab);
  FrequencyTable table =
      mode == "words" ? merged_word_frequencies(corpus) : token_frequencies(corpus);
  for (const auto& [token, count] : table.top_k(top)) {
    std::printf("%-24s %llu\n", token.c_str(),
                static_cast<unsigned long long>(count));
  }
  if (!out_path.empty()) {
    write_file(out_path, frequency_to_tsv(table));
    std::printf("wrote %s\n", out_path.c_str());
  }
  return kExitOk;
}

int cmd_phrases(const CommonModelArgs& args, const std::string& phrase_path,
                const std::string& out_dir) {
  Vocabulary vocab = load_vocab(validated(args.vocab_path, "vocab"));
  std::vector<Example> examples =
      ingest_task(args.task, validated(args.data_path, "data"));
  std::vector<TokenizedText> corpus = corpus_for(args.task, examples, vocab);
  std::vector<PhraseQuery> queries =
      load_phrase_file(validated(phrase_path, "phrases"), vocab);
  std::vector<PhraseCount> counts = phrase_frequency(corpus, queries);
  std::printf("%zu phrases against %zu texts\n", queries.size(), corpus.size());
  for (const PhraseCount& count : counts) {
    if (count.hits == 0) continue;
    std::printf("%-32s hits=%zu examples=%zu%s\n", count.label.c_str(),
                count.hits, count.examples, count.degraded ? " (degraded)" : "");
  }
  if (!out_dir.empty()) {
    std::vector<std::vector<PhraseHit>> hits;
    hits.reserve(queries.size());
    for (const PhraseQuery& query : queries) {
      hits.push_back(phrase_search(corpus, query));
    }
    write_file(std::filesystem::path(out_dir) / "phrase_counts.tsv",
               phrase_counts_to_tsv(counts));
    write_file(std::filesystem::path(out_dir) / "phrase_hits.tsv",
               phrase_hits_to_tsv(queries, hits));
  }
  return kExitOk;
}

int cmd_train(const CommonModelArgs& args, const ModelConfig& base,
              const std::string& out_path) {
  Vocabulary vocab = load_vocab(validated(args.vocab_path, "vocab"));
  std::vector<Example> examples =
      ingest_task(args.task, validated(args.data_path, "data"));
  std::vector<CompiledExample> compiled =
      compile_dataset(examples, vocab, args.max_tokens);
  ModelConfig config = model_config_for(args.task, vocab, base);
  TrainResult result = train(init_model(config), compiled, config);
  EvalMetrics metrics = evaluate(result.model, compiled);
  save_checkpoint(result.model, out_path);
  std::printf("trained on %zu examples, %d epochs\n", examples.size(),
              config.epochs);
  if (!result.epoch_losses.empty()) {
    std::printf("loss %s -> %s\n", format_double(result.epoch_losses.front()).c_str(),
                format_double(result.epoch_losses.back()).c_str());
  }
  std::printf("train accuracy %.4f", metrics.accuracy);
  if (metrics.f1) std::printf(", f1 %.4f", *metrics.f1);
  std::printf("\ncheckpoint: %s\n", out_path.c_str());
  return kExitOk;
}

int cmd_eval(const CommonModelArgs& args, const std::string& model_path) {
  Vocabulary vocab = load_vocab(validated(args.vocab_path, "vocab"));
  Classifier model = load_checkpoint(validated(model_path, "model"));
  std::vector<CompiledExample> compiled = compile_dataset(
      ingest_task(args.task, validated(args.data_path, "data")), vocab,
      args.max_tokens);
  EvalMetrics metrics = evaluate(model, compiled);
  std::printf("examples %zu\naccuracy %.6f\n", metrics.count, metrics.accuracy);
  if (metrics.f1) std::printf("f1 %.6f\n", *metrics.f1);
  return kExitOk;
}

int cmd_attribute(const CommonModelArgs& args, const std::string& model_path,
                  int steps, std::size_t workers, bool normalize,
                  const std::string& out_dir) {
  Vocabulary vocab = load_vocab(validated(args.vocab_path, "vocab"));
  Classifier model = load_checkpoint(validated(model_path, "model"));
  std::vector<CompiledExample> compiled = compile_dataset(
      ingest_task(args.task, validated(args.data_path, "data")), vocab,
      args.max_tokens);
  AttributionOptions options;
  options.steps = steps;
  options.workers = workers;
  std::vector<AttributionRecord> records =
      attribute_dataset(model, compiled, options);
  write_file(std::filesystem::path(out_dir) / "records.tsv",
             records_to_tsv(records));
  write_file(std::filesystem::path(out_dir) / "token_scores.tsv",
             token_scores_to_tsv(records, normalize));
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (!r.ok()) ++failed;
  }
  std::printf("attributed %zu examples (%zu failed), steps=%d\n", records.size(),
              failed, steps);
  std::printf("wrote %s/records.tsv and token_scores.tsv\n", out_dir.c_str());
  return kExitOk;
}

std::vector<AttributionRecord> load_record_dir(const std::string& dir) {
  std::filesystem::path base(validated(dir, "records"));
  return records_from_files(base / "records.tsv", base / "token_scores.tsv");
}

int cmd_analyze(const std::vector<std::string>& named_records, double bin_width,
                const std::vector<std::string>& window_args,
                const std::string& out_dir) {
  std::map<std::string, std::vector<AttributionRecord>> groups;
  std::vector<std::string> names;
  for (const std::string& arg : named_records) {
    auto [name, path] = parse_named_path(arg);
    groups[name] = load_record_dir(path);
    names.push_back(name);
  }
  if (groups.empty()) throw ConfigError("at least one --records name=dir required");

  std::filesystem::path base(out_dir);
  write_file(base / "distribution_stats.tsv",
             dist_stats_to_tsv(distribution_stats_by_model(groups)));

  // Correctness sets need aligned example ids across all record sets.
  const auto& reference = groups.begin()->second;
  CorrectnessMatrix matrix;
  matrix.models = names;
  matrix.rows.assign(reference.size(), {});
  for (std::size_t i = 0; i < reference.size(); ++i) {
    for (const std::string& name : names) {
      const auto& records = groups[name];
      if (records.size() != reference.size() ||
          records[i].example_id != reference[i].example_id) {
        throw RaggedMatrixError("record sets do not cover the same examples");
      }
      matrix.rows[i].push_back(
          static_cast<std::uint8_t>(records[i].ok() && records[i].correct));
    }
  }
  write_file(base / "correctness_sets.tsv",
             correctness_to_tsv(correctness_sets(matrix)));

  for (const std::string& name : names) {
    write_file(base / ("scatter_" + name + ".tsv"),
               scatter_export(groups[name]));
    write_file(base / ("attribution_histograms_" + name + ".tsv"),
               histograms_to_tsv(attribution_histograms(groups[name], bin_width)));
    for (std::size_t w = 0; w < window_args.size(); ++w) {
      auto comma = window_args[w].find(',');
      if (comma == std::string::npos) {
        throw ConfigError("window must be lo,hi: " + window_args[w]);
      }
      std::pair<double, double> window{std::stod(window_args[w].substr(0, comma)),
                                       std::stod(window_args[w].substr(comma + 1))};
      write_file(base / ("attribution_histograms_" + name + "_w" +
                         std::to_string(w) + ".tsv"),
                 histograms_to_tsv(
                     attribution_histograms(groups[name], bin_width, window)));
    }
  }
  std::printf("analyzed %zu record sets -> %s\n", groups.size(), out_dir.c_str());
  return kExitOk;
}

int cmd_report(const std::string& records_dir, const std::string& out_path,
               std::size_t max_examples, double neutral_epsilon) {
  std::vector<AttributionRecord> records = load_record_dir(records_dir);
  ReportDocument doc = build_report(records, max_examples, neutral_epsilon);
  write_file(out_path, render_html(doc));
  std::printf("report with %zu blocks -> %s\n", doc.blocks.size(),
              out_path.c_str());
  return kExitOk;
}

int cmd_pipeline(const std::string& config_path, const std::string& output_dir,
                 std::optional<std::uint64_t> seed, std::optional<int> epochs,
                 std::optional<int> steps, std::optional<std::size_t> workers) {
  RunConfig config = load_run_config(validated(config_path, "config"));
  if (!output_dir.empty()) config.output_dir = output_dir;
  if (seed) config.model.seed = *seed;
  if (epochs) config.model.epochs = *epochs;
  if (steps) config.steps = *steps;
  if (workers) config.workers = *workers;
  Manifest manifest = run_pipeline(config);
  std::printf("pipeline complete: %zu artifacts under %s\n",
              manifest.files.size(), config.output_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attribution analysis toolkit for legal-text classifiers"};
  app.require_subcommand(1);

  // tokenize
  std::string vocab_path, text, input_path;
  bool add_specials = false;
  auto* tok_cmd = app.add_subcommand("tokenize", "Tokenize text with a vocab");
  tok_cmd->add_option("--vocab", vocab_path, "vocab file")->required();
  tok_cmd->add_option("--text", text, "inline text");
  tok_cmd->add_option("--input", input_path, "file with one text per line");
  tok_cmd->add_flag("--specials", add_specials, "wrap in [CLS]/[SEP]");

  // vocab-analyze
  std::vector<std::string> named_vocabs;
  std::string overlap_out;
  auto* vocab_cmd =
      app.add_subcommand("vocab-analyze", "Vocabulary overlap partition");
  vocab_cmd->add_option("--vocab", named_vocabs, "name=path (repeat)")
      ->required()
      ->expected(-2);
  vocab_cmd->add_option("--out", overlap_out, "write TSV here");

  // shared dataset/model args
  CommonModelArgs freq_args, phrase_args, train_args, eval_args, attr_args;
  auto add_common = [](CLI::App* cmd, CommonModelArgs& args, bool with_max) {
    cmd->add_option("--task", args.task, "overrule|casehold|synthetic");
    cmd->add_option("--vocab", args.vocab_path, "vocab file")->required();
    cmd->add_option("--data", args.data_path, "dataset file")->required();
    if (with_max) cmd->add_option("--max-tokens", args.max_tokens, "position cap");
  };

  // freq
  std::vector<std::string> freq_extra;
  std::size_t freq_top = 50;
  std::string freq_mode = "words", freq_out;
  auto* freq_cmd = app.add_subcommand("freq", "Token/word frequency tables");
  add_common(freq_cmd, freq_args, false);
  freq_cmd->add_option("--more-data", freq_extra, "additional dataset files");
  freq_cmd->add_option("--top", freq_top, "rows to print");
  freq_cmd->add_option("--mode", freq_mode, "words|tokens");
  freq_cmd->add_option("--out", freq_out, "write TSV here");

  // phrases
  std::string phrase_file, phrase_out;
  auto* phrase_cmd = app.add_subcommand("phrases", "Phrase query frequencies");
  add_common(phrase_cmd, phrase_args, false);
  phrase_cmd->add_option("--phrases", phrase_file, "one phrase per line")
      ->required();
  phrase_cmd->add_option("--out", phrase_out, "write hit/count TSVs here");

  // train
  ModelConfig base_config;
  std::string train_out = "checkpoint.json";
  auto* train_cmd = app.add_subcommand("train", "Train the reference classifier");
  add_common(train_cmd, train_args, true);
  train_cmd->add_option("--embed-dim", base_config.embed_dim);
  train_cmd->add_option("--hidden-dim", base_config.hidden_dim);
  train_cmd->add_option("--seed", base_config.seed);
  train_cmd->add_option("--lr", base_config.learning_rate);
  train_cmd->add_option("--epochs", base_config.epochs);
  train_cmd->add_option("--batch-size", base_config.batch_size);
  train_cmd->add_option("--out", train_out, "checkpoint path");

  // eval
  std::string eval_model;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  add_common(eval_cmd, eval_args, true);
  eval_cmd->add_option("--model", eval_model, "checkpoint path")->required();

  // attribute
  std::string attr_model, attr_out = ".";
  int attr_steps = 50;
  std::size_t attr_workers = 1;
  bool attr_normalize = false;
  auto* attr_cmd =
      app.add_subcommand("attribute", "Integrated-gradients attribution");
  add_common(attr_cmd, attr_args, true);
  attr_cmd->add_option("--model", attr_model, "checkpoint path")->required();
  attr_cmd->add_option("--steps", attr_steps, "path steps");
  attr_cmd->add_option("--workers", attr_workers, "worker threads");
  attr_cmd->add_flag("--normalize", attr_normalize,
                     "L2-normalize exported token scores");
  attr_cmd->add_option("--out", attr_out, "output directory")->required();

  // analyze
  std::vector<std::string> analyze_records, analyze_windows;
  double analyze_bin = 0.01;
  std::string analyze_out = ".";
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Cross-model record analytics");
  analyze_cmd->add_option("--records", analyze_records, "name=dir (repeat)")
      ->required()
      ->expected(-1);
  analyze_cmd->add_option("--bin-width", analyze_bin, "histogram bin width");
  analyze_cmd->add_option("--window", analyze_windows, "lo,hi (repeat)");
  analyze_cmd->add_option("--out", analyze_out, "output directory")->required();

  // report
  std::string report_records, report_out = "report.html";
  std::size_t report_max = 25;
  double report_eps = 1e-4;
  auto* report_cmd = app.add_subcommand("report", "Render colored-token HTML");
  report_cmd->add_option("--records", report_records, "attribution directory")
      ->required();
  report_cmd->add_option("--out", report_out, "HTML path");
  report_cmd->add_option("--max-examples", report_max, "block cap");
  report_cmd->add_option("--neutral-epsilon", report_eps,
                         "|score| fraction rendered neutral");

  // pipeline
  std::string pipe_config, pipe_out;
  std::optional<std::uint64_t> pipe_seed;
  std::optional<int> pipe_epochs, pipe_steps;
  std::optional<std::size_t> pipe_workers;
  auto* pipe_cmd = app.add_subcommand("pipeline", "Full end-to-end run");
  pipe_cmd->add_option("--config", pipe_config, "JSON config")->required();
  pipe_cmd->add_option("--output-dir", pipe_out, "override output dir");
  pipe_cmd->add_option("--seed", pipe_seed, "override model seed");
  pipe_cmd->add_option("--epochs", pipe_epochs, "override epochs");
  pipe_cmd->add_option("--steps", pipe_steps, "override attribution steps");
  pipe_cmd->add_option("--workers", pipe_workers, "override worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (tok_cmd->parsed()) {
      if (text.empty() && input_path.empty()) {
        throw ConfigError("tokenize needs --text or --input");
      }
      return cmd_tokenize(vocab_path, text, input_path, add_specials);
    }
    if (vocab_cmd->parsed()) return cmd_vocab_analyze(named_vocabs, overlap_out);
    if (freq_cmd->parsed()) {
      return cmd_freq(freq_args, freq_extra, freq_top, freq_mode, freq_out);
    }
    if (phrase_cmd->parsed()) {
      return cmd_phrases(phrase_args, phrase_file, phrase_out);
    }
    if (train_cmd->parsed()) return cmd_train(train_args, base_config, train_out);
    if (eval_cmd->parsed()) return cmd_eval(eval_args, eval_model);
    if (attr_cmd->parsed()) {
      return cmd_attribute(attr_args, attr_model, attr_steps, attr_workers,
                           attr_normalize, attr_out);
    }
    if (analyze_cmd->parsed()) {
      return cmd_analyze(analyze_records, analyze_bin, analyze_windows,
                         analyze_out);
    }
    if (report_cmd->parsed()) {
      return cmd_report(report_records, report_out, report_max, report_eps);
    }
    if (pipe_cmd->parsed()) {
      return cmd_pipeline(pipe_config, pipe_out, pipe_seed, pipe_epochs,
                          pipe_steps, pipe_workers);
    }
  } catch (const ConfigError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStageFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStageFailure;
  }
  return kExitOk;
}
