#include "lexattr/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>

#include <nlohmann/json.hpp>

#include "lexattr/error.hpp"
#include "lexattr/io.hpp"
#include "lexattr/report.hpp"

namespace lexattr {

using nlohmann::json;

namespace {

const std::vector<std::string> kKnownKeys = {
    "task",       "model_name", "paths",   "model",   "attribution",
    "analytics",  "tokenizer",  "report",  "workers", "synthetic"};

void require_known_keys(const json& obj, const std::vector<std::string>& known,
                        const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key '" + key + "' in " + where);
    }
  }
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse config " + path.string() + ": " + e.what());
  }
  require_known_keys(j, kKnownKeys, "top level");

  RunConfig config;
  config.task = j.value("task", config.task);
  config.model_name = j.value("model_name", config.model_name);
  config.workers = j.value("workers", config.workers);

  if (j.contains("paths")) {
    const json& p = j["paths"];
    require_known_keys(p,
                       {"train", "test", "vocab", "stopwords", "phrases",
                        "output_dir", "extra_vocabs"},
                       "paths");
    config.train_path = p.value("train", "");
    config.test_path = p.value("test", "");
    config.vocab_path = p.value("vocab", "");
    config.stopword_path = p.value("stopwords", "");
    config.phrase_path = p.value("phrases", "");
    config.output_dir = p.value("output_dir", "");
    if (p.contains("extra_vocabs")) {
      for (const auto& entry : p["extra_vocabs"]) {
        config.extra_vocabs.emplace_back(entry.at("name").get<std::string>(),
                                         entry.at("path").get<std::string>());
      }
    }
  }
  if (j.contains("model")) {
    const json& m = j["model"];
    require_known_keys(m,
                       {"embed_dim", "hidden_dim", "seed", "learning_rate",
                        "epochs", "batch_size"},
                       "model");
    config.model.embed_dim = m.value("embed_dim", config.model.embed_dim);
    config.model.hidden_dim = m.value("hidden_dim", config.model.hidden_dim);
    config.model.seed = m.value("seed", config.model.seed);
    config.model.learning_rate =
        m.value("learning_rate", config.model.learning_rate);
    config.model.epochs = m.value("epochs", config.model.epochs);
    config.model.batch_size = m.value("batch_size", config.model.batch_size);
  }
  if (j.contains("attribution")) {
    const json& a = j["attribution"];
    require_known_keys(a, {"steps", "normalize_scores", "completeness_tolerance"},
                       "attribution");
    config.steps = a.value("steps", config.steps);
    config.normalize_scores = a.value("normalize_scores", config.normalize_scores);
    config.completeness_tolerance =
        a.value("completeness_tolerance", config.completeness_tolerance);
  }
  if (j.contains("analytics")) {
    const json& a = j["analytics"];
    require_known_keys(a, {"top_k", "bin_width", "windows", "freq_mode"},
                       "analytics");
    config.top_k = a.value("top_k", config.top_k);
    config.bin_width = a.value("bin_width", config.bin_width);
    config.freq_mode = a.value("freq_mode", config.freq_mode);
    if (a.contains("windows")) {
      config.windows.clear();
      for (const auto& w : a["windows"]) {
        if (!w.is_array() || w.size() != 2) {
          throw ConfigError("analytics.windows entries must be [lo, hi]");
        }
        config.windows.emplace_back(w[0].get<double>(), w[1].get<double>());
      }
    }
  }
  if (j.contains("tokenizer")) {
    require_known_keys(j["tokenizer"], {"max_tokens"}, "tokenizer");
    config.max_tokens = j["tokenizer"].value("max_tokens", config.max_tokens);
  }
  if (j.contains("report")) {
    require_known_keys(j["report"], {"max_examples", "neutral_epsilon"}, "report");
    config.report_max_examples =
        j["report"].value("max_examples", config.report_max_examples);
    config.neutral_epsilon =
        j["report"].value("neutral_epsilon", config.neutral_epsilon);
  }
  if (j.contains("synthetic")) {
    const json& s = j["synthetic"];
    require_known_keys(s, {"train_size", "test_size", "seed"}, "synthetic");
    config.synthetic.train_size =
        s.value("train_size", config.synthetic.train_size);
    config.synthetic.test_size = s.value("test_size", config.synthetic.test_size);
    config.synthetic.seed = s.value("seed", config.synthetic.seed);
  }
  return config;
}

void RunConfig::validate() const {
  if (task != "synthetic" && task != "overrule" && task != "casehold") {
    throw ConfigError("unknown task '" + task + "'");
  }
  if (output_dir.empty()) throw ConfigError("output_dir is required");
  auto require_file = [](const std::string& p, const std::string& what) {
    if (p.empty()) throw ConfigError(what + " path is required for this task");
    if (!std::filesystem::exists(p)) {
      throw ConfigError(what + " path does not exist: " + p);
    }
  };
  if (task != "synthetic") {
    require_file(train_path, "train dataset");
    require_file(test_path, "test dataset");
    require_file(vocab_path, "vocabulary");
  }
  for (const auto& [name, path] : extra_vocabs) {
    require_file(path, "extra vocabulary '" + name + "'");
  }
  if (!stopword_path.empty()) require_file(stopword_path, "stop-word list");
  if (!phrase_path.empty()) require_file(phrase_path, "phrase list");
  if (steps < 1) throw ConfigError("attribution.steps must be >= 1");
  if (!(bin_width > 0.0)) throw ConfigError("analytics.bin_width must be > 0");
  if (max_tokens < 8) throw ConfigError("tokenizer.max_tokens must be >= 8");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (freq_mode != "words" && freq_mode != "tokens") {
    throw ConfigError("analytics.freq_mode must be 'words' or 'tokens'");
  }
  if (!(completeness_tolerance > 0.0)) {
    throw ConfigError("attribution.completeness_tolerance must be > 0");
  }
}

std::string manifest_to_json(const Manifest& manifest) {
  json files = json::array();
  for (const ManifestEntry& entry : manifest.files) {
    files.push_back({{"path", entry.path},
                     {"sha256", entry.sha256},
                     {"bytes", entry.bytes}});
  }
  json j{{"created_at", manifest.created_at}, {"files", files}};
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  json j = json::parse(text);
  Manifest manifest;
  manifest.created_at = j.at("created_at").get<std::string>();
  for (const auto& f : j.at("files")) {
    manifest.files.push_back({f.at("path").get<std::string>(),
                              f.at("sha256").get<std::string>(),
                              f.at("bytes").get<std::uint64_t>()});
  }
  return manifest;
}

// --- record and table encodings ---

std::string records_to_tsv(const std::vector<AttributionRecord>& records) {
  std::string out =
      "example_id\tprediction_probability\tattribution_sum\tcorrect\t"
      "completeness_gap\terror\n";
  for (const AttributionRecord& r : records) {
    check_tsv_field(r.error, "record error");
    out += r.example_id;
    out += '\t';
    out += r.ok() ? format_double(r.prediction_probability) : "";
    out += '\t';
    out += r.ok() ? format_double(r.attribution_sum) : "";
    out += '\t';
    out += r.ok() ? (r.correct ? "1" : "0") : "";
    out += '\t';
    out += r.ok() ? format_double(r.completeness_gap) : "";
    out += '\t';
    out += r.error;
    out += '\n';
  }
  return out;
}

std::string token_scores_to_tsv(const std::vector<AttributionRecord>& records,
                                bool normalize) {
  std::string out = "example_id\ttoken_index\ttoken\tis_special\tscore\n";
  for (const AttributionRecord& r : records) {
    if (!r.ok()) continue;
    std::vector<double> scores = r.token_scores;
    if (normalize) {
      double norm_sq = 0.0;
      for (double s : scores) norm_sq += s * s;
      if (norm_sq > 0.0) {
        double inv = 1.0 / std::sqrt(norm_sq);
        for (double& s : scores) s *= inv;
      }
    }
    for (std::size_t i = 0; i < r.tokens.size(); ++i) {
      check_tsv_field(r.tokens[i], "token");
      out += r.example_id;
      out += '\t';
      out += std::to_string(i);
      out += '\t';
      out += r.tokens[i];
      out += '\t';
      out += r.is_special[i] ? "1" : "0";
      out += '\t';
      out += format_double(scores[i]);
      out += '\n';
    }
  }
  return out;
}

std::vector<AttributionRecord> records_from_files(
    const std::filesystem::path& records_path,
    const std::filesystem::path& scores_path) {
  std::vector<AttributionRecord> records;
  std::map<std::string, std::size_t> by_id;

  std::vector<std::string> lines = read_lines(records_path);
  if (lines.empty() || split_tsv(lines[0]).size() != 6) {
    throw FormatError("unexpected records header in " + records_path.string());
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> f = split_tsv(lines[i]);
    if (f.size() != 6) {
      throw FormatError("bad record row at " + records_path.string() + ":" +
                        std::to_string(i + 1));
    }
    AttributionRecord r;
    r.example_id = f[0];
    r.error = f[5];
    if (r.ok()) {
      r.prediction_probability = std::stod(f[1]);
      r.attribution_sum = std::stod(f[2]);
      r.correct = f[3] == "1";
      r.completeness_gap = std::stod(f[4]);
    }
    by_id[r.example_id] = records.size();
    records.push_back(std::move(r));
  }

  std::vector<std::string> score_lines = read_lines(scores_path);
  for (std::size_t i = 1; i < score_lines.size(); ++i) {
    if (score_lines[i].empty()) continue;
    std::vector<std::string> f = split_tsv(score_lines[i]);
    if (f.size() != 5) {
      throw FormatError("bad token score row at " + scores_path.string() + ":" +
                        std::to_string(i + 1));
    }
    auto it = by_id.find(f[0]);
    if (it == by_id.end()) {
      throw FormatError("token scores reference unknown example '" + f[0] + "'");
    }
    AttributionRecord& r = records[it->second];
    r.tokens.push_back(f[2]);
    r.is_special.push_back(f[3] == "1" ? 1 : 0);
    r.token_scores.push_back(std::stod(f[4]));
  }
  return records;
}

std::string frequency_to_tsv(const FrequencyTable& table) {
  std::string out = "token\tcount\n";
  for (const auto& [token, count] : table.top_k(table.counts.size())) {
    check_tsv_field(token, "token");
    out += token;
    out += '\t';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

std::string partition_to_tsv(const PartitionReport& report, bool with_members) {
  std::string out = with_members ? "cell\tsize\tmembers\n" : "cell\tsize\n";
  for (const auto& [mask, size] : report.cell_sizes) {
    out += report.cell_label(mask);
    out += '\t';
    out += std::to_string(size);
    if (with_members) {
      out += '\t';
      auto it = report.members.find(mask);
      if (it != report.members.end()) {
        for (std::size_t i = 0; i < it->second.size(); ++i) {
          if (i) out += ' ';
          out += it->second[i];
        }
      }
    }
    out += '\n';
  }
  return out;
}

std::string stopword_split_to_tsv(const StopwordSplit& split) {
  std::string out = "class\ttoken\n";
  for (const std::string& token : split.stop) {
    out += "stop\t" + token + "\n";
  }
  for (const std::string& token : split.content) {
    out += "content\t" + token + "\n";
  }
  return out;
}

std::string histograms_to_tsv(const std::map<std::string, Histogram>& histograms) {
  std::string out = "token\tbin_lo\tbin_hi\tcount\n";
  for (const auto& [token, hist] : histograms) {
    for (const auto& [bin, count] : hist.bins) {
      out += token;
      out += '\t';
      out += format_double(static_cast<double>(bin) * hist.bin_width);
      out += '\t';
      out += format_double(static_cast<double>(bin + 1) * hist.bin_width);
      out += '\t';
      out += std::to_string(count);
      out += '\n';
    }
  }
  return out;
}

std::string dist_stats_to_tsv(const std::map<std::string, DistStats>& stats) {
  std::string out =
      "model\tcount\tmean_probability\tstd_probability\tmean_attribution_sum\t"
      "std_attribution_sum\n";
  for (const auto& [name, s] : stats) {
    out += name;
    out += '\t';
    out += std::to_string(s.count);
    out += '\t';
    out += format_double(s.mean_probability);
    out += '\t';
    out += format_double(s.std_probability);
    out += '\t';
    out += format_double(s.mean_attribution_sum);
    out += '\t';
    out += format_double(s.std_attribution_sum);
    out += '\n';
  }
  return out;
}

std::string coverage_to_tsv(const std::vector<CoverageRow>& rows,
                            const std::vector<std::string>& vocab_names) {
  std::string out = "token\tcount";
  for (const std::string& name : vocab_names) out += '\t' + name;
  out += "\tmissing_somewhere\n";
  for (const CoverageRow& row : rows) {
    out += row.token;
    out += '\t';
    out += std::to_string(row.count);
    for (std::size_t i = 0; i < vocab_names.size(); ++i) {
      out += '\t';
      out += (row.vocab_mask & (1u << i)) ? "1" : "0";
    }
    out += '\t';
    out += row.missing_somewhere ? "1" : "0";
    out += '\n';
  }
  return out;
}

std::string correctness_to_tsv(const CorrectnessReport& report) {
  std::string out = "cell\texamples\n";
  for (const auto& [mask, size] : report.partition.cell_sizes) {
    out += report.partition.cell_label(mask);
    out += '\t';
    out += std::to_string(size);
    out += '\n';
  }
  out += "any_correct\t" + std::to_string(report.any_correct) + "\n";
  out += "oracle_bound\t" + format_double(report.oracle_bound) + "\n";
  return out;
}

std::string phrase_counts_to_tsv(const std::vector<PhraseCount>& counts) {
  std::string out = "phrase\thits\texamples\tdegraded\n";
  for (const PhraseCount& c : counts) {
    check_tsv_field(c.label, "phrase");
    out += c.label;
    out += '\t';
    out += std::to_string(c.hits);
    out += '\t';
    out += std::to_string(c.examples);
    out += '\t';
    out += c.degraded ? "1" : "0";
    out += '\n';
  }
  return out;
}

std::string phrase_hits_to_tsv(const std::vector<PhraseQuery>& queries,
                               const std::vector<std::vector<PhraseHit>>& hits) {
  std::string out = "phrase\texample_index\ttoken_offset\n";
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (const PhraseHit& hit : hits[q]) {
      out += queries[q].label;
      out += '\t';
      out += std::to_string(hit.example_index);
      out += '\t';
      out += std::to_string(hit.token_offset);
      out += '\n';
    }
  }
  return out;
}

// --- pipeline ---

namespace {

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects artifacts as they are written and renders the manifest last.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path out_dir)
      : out_dir_(std::move(out_dir)) {}

  void write(const std::string& relative, const std::string& content) {
    write_file(out_dir_ / relative, content);
    entries_.push_back(
        {relative, sha256_hex(content), static_cast<std::uint64_t>(content.size())});
  }

  Manifest finish() {
    Manifest manifest;
    manifest.created_at = utc_timestamp();
    std::sort(entries_.begin(), entries_.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) {
                return a.path < b.path;
              });
    manifest.files = std::move(entries_);
    write_file(out_dir_ / "manifest.json", manifest_to_json(manifest));
    return manifest;
  }

 private:
  std::filesystem::path out_dir_;
  std::vector<ManifestEntry> entries_;
};

template <class Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

json metrics_json(const RunConfig& config, std::size_t train_size,
                  std::size_t test_size, const TrainResult& trained,
                  const EvalMetrics& train_metrics, const EvalMetrics& test_metrics,
                  const std::vector<AttributionRecord>& records) {
  std::size_t failed = 0;
  std::size_t flagged = 0;
  for (const AttributionRecord& r : records) {
    if (!r.ok()) {
      ++failed;
    } else if (r.completeness_gap > config.completeness_tolerance) {
      ++flagged;
    }
  }
  json j{{"task", config.task},
         {"model", config.model_name},
         {"train_examples", train_size},
         {"test_examples", test_size},
         {"train_accuracy", train_metrics.accuracy},
         {"test_accuracy", test_metrics.accuracy},
         {"loss_trace", trained.epoch_losses},
         {"attribution",
          {{"steps", config.steps},
           {"records", records.size()},
           {"failed", failed},
           {"completeness_tolerance", config.completeness_tolerance},
           {"completeness_flagged", flagged}}}};
  if (train_metrics.f1) j["train_f1"] = *train_metrics.f1;
  if (test_metrics.f1) j["test_f1"] = *test_metrics.f1;
  return j;
}

}  // namespace

Manifest run_pipeline(const RunConfig& config) {
  config.validate();
  ArtifactWriter artifacts(config.output_dir);

  // Load or synthesize inputs.
  Vocabulary vocab;
  std::vector<Example> train_set;
  std::vector<Example> test_set;
  if (config.task == "synthetic") {
    stage("ingest", [&] {
      SyntheticData data = make_synthetic_binary(config.synthetic);
      std::string vocab_text;
      for (const std::string& line : data.vocab_lines) vocab_text += line + "\n";
      artifacts.write("dataset/vocab.txt", vocab_text);
      artifacts.write("dataset/train.tsv", overrule_to_tsv(data.train));
      artifacts.write("dataset/test.tsv", overrule_to_tsv(data.test));
      vocab = Vocabulary::from_lines(data.vocab_lines, "synthetic");
      train_set = std::move(data.train);
      test_set = std::move(data.test);
      return 0;
    });
  } else {
    stage("load-vocab", [&] {
      vocab = load_vocab(config.vocab_path);
      return 0;
    });
    stage("ingest", [&] {
      if (config.task == "overrule") {
        train_set = ingest_overrule(config.train_path);
        test_set = ingest_overrule(config.test_path);
      } else {
        train_set = ingest_casehold(config.train_path);
        test_set = ingest_casehold(config.test_path);
      }
      return 0;
    });
  }

  const bool multiple_choice = config.task == "casehold";

  // Tokenize model inputs and the analytics corpus (whole dataset, no
  // specials; multiple-choice contributes context and each holding).
  std::vector<CompiledExample> train_compiled;
  std::vector<CompiledExample> test_compiled;
  std::vector<TokenizedText> corpus;
  stage("tokenize", [&] {
    train_compiled = compile_dataset(train_set, vocab, config.max_tokens);
    test_compiled = compile_dataset(test_set, vocab, config.max_tokens);
    auto add_corpus = [&](const std::vector<Example>& examples) {
      for (const Example& example : examples) {
        if (example.kind == ExampleKind::kBinary) {
          corpus.push_back(tokenize(example.text, vocab, false));
        } else {
          corpus.push_back(tokenize(example.context, vocab, false));
          for (const std::string& option : example.options) {
            corpus.push_back(tokenize(option, vocab, false));
          }
        }
      }
    };
    add_corpus(train_set);
    add_corpus(test_set);
    return 0;
  });

  // Train and evaluate.
  TrainResult trained;
  EvalMetrics train_metrics;
  EvalMetrics test_metrics;
  stage("train", [&] {
    ModelConfig model_config = config.model;
    model_config.vocab_size = static_cast<int>(vocab.size());
    model_config.num_classes = multiple_choice ? 1 : 2;
    model_config.pad_id = vocab.pad_id().value_or(-1);
    Classifier model = init_model(model_config);
    trained = train(std::move(model), train_compiled, model_config);
    return 0;
  });
  stage("evaluate", [&] {
    train_metrics = evaluate(trained.model, train_compiled);
    test_metrics = evaluate(trained.model, test_compiled);
    return 0;
  });

  // Attribute the test split, gold labels as targets.
  std::vector<AttributionRecord> records;
  stage("attribute", [&] {
    AttributionOptions options;
    options.steps = config.steps;
    options.workers = config.workers;
    records = attribute_dataset(trained.model, test_compiled, options);
    artifacts.write("attribution/records.tsv", records_to_tsv(records));
    artifacts.write("attribution/token_scores.tsv",
                    token_scores_to_tsv(records, config.normalize_scores));
    return 0;
  });

  stage("metrics", [&] {
    artifacts.write("metrics/metrics.json",
                    metrics_json(config, train_set.size(), test_set.size(),
                                 trained, train_metrics, test_metrics, records)
                            .dump(2) +
                        "\n");
    return 0;
  });

  stage("analytics", [&] {
    FrequencyTable token_table = token_frequencies(corpus);
    FrequencyTable word_table = merged_word_frequencies(corpus);
    artifacts.write("analytics/token_frequencies.tsv",
                    frequency_to_tsv(token_table));
    artifacts.write("analytics/word_frequencies.tsv",
                    frequency_to_tsv(word_table));

    if (!config.stopword_path.empty()) {
      std::set<std::string> stoplist = load_stoplist(config.stopword_path);
      const FrequencyTable& source =
          config.freq_mode == "words" ? word_table : token_table;
      std::vector<std::string> frequent;
      for (const auto& [token, count] : source.top_k(config.top_k)) {
        (void)count;
        frequent.push_back(token);
      }
      artifacts.write("analytics/stopword_split.tsv",
                      stopword_split_to_tsv(stopword_split(frequent, stoplist)));
    }

    artifacts.write("analytics/attribution_histograms.tsv",
                    histograms_to_tsv(attribution_histograms(
                        records, config.bin_width)));
    for (std::size_t w = 0; w < config.windows.size(); ++w) {
      artifacts.write(
          "analytics/attribution_histograms_w" + std::to_string(w) + ".tsv",
          histograms_to_tsv(attribution_histograms(records, config.bin_width,
                                                   config.windows[w])));
    }

    std::map<std::string, std::vector<AttributionRecord>> groups;
    groups[config.model_name] = records;
    artifacts.write("analytics/distribution_stats.tsv",
                    dist_stats_to_tsv(distribution_stats_by_model(groups)));
    artifacts.write("analytics/scatter.tsv", scatter_export(records));

    CorrectnessMatrix matrix;
    matrix.models = {config.model_name};
    for (const AttributionRecord& r : records) {
      matrix.rows.push_back({static_cast<std::uint8_t>(r.ok() && r.correct)});
    }
    artifacts.write("analytics/correctness_sets.tsv",
                    correctness_to_tsv(correctness_sets(matrix)));

    std::vector<std::pair<std::string, const Vocabulary*>> named_vocabs;
    std::vector<Vocabulary> extra_storage;
    extra_storage.reserve(config.extra_vocabs.size());
    named_vocabs.emplace_back(config.model_name, &vocab);
    for (const auto& [name, path] : config.extra_vocabs) {
      extra_storage.push_back(load_vocab(path));
      named_vocabs.emplace_back(name, &extra_storage.back());
    }
    std::vector<std::string> vocab_names;
    for (const auto& [name, v] : named_vocabs) {
      (void)v;
      vocab_names.push_back(name);
    }
    artifacts.write(
        "analytics/token_coverage.tsv",
        coverage_to_tsv(
            model_token_coverage(token_table, named_vocabs, config.top_k),
            vocab_names));
    if (named_vocabs.size() >= 2) {
      artifacts.write("analytics/vocab_overlap.tsv",
                      partition_to_tsv(vocab_overlap(named_vocabs), true));
    }

    if (!config.phrase_path.empty()) {
      std::vector<PhraseQuery> queries = load_phrase_file(config.phrase_path, vocab);
      std::vector<std::vector<PhraseHit>> hits;
      hits.reserve(queries.size());
      for (const PhraseQuery& query : queries) {
        hits.push_back(phrase_search(corpus, query));
      }
      artifacts.write("analytics/phrase_hits.tsv",
                      phrase_hits_to_tsv(queries, hits));
      artifacts.write("analytics/phrase_counts.tsv",
                      phrase_counts_to_tsv(phrase_frequency(corpus, queries)));
    }
    return 0;
  });

  stage("report", [&] {
    ReportDocument doc = build_report(records, config.report_max_examples,
                                      config.neutral_epsilon);
    artifacts.write("report/report.html", render_html(doc));
    return 0;
  });

  stage("checkpoint", [&] {
    artifacts.write("model/checkpoint.json", checkpoint_to_json(trained.model));
    return 0;
  });

  return stage("manifest", [&] { return artifacts.finish(); });
}

}  // namespace lexattr
