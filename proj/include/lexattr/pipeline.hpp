#ifndef LEXATTR_PIPELINE_HPP_
#define LEXATTR_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lexattr/analytics.hpp"
#include "lexattr/attribution.hpp"
#include "lexattr/dataset.hpp"
#include "lexattr/model.hpp"
#include "lexattr/phrase.hpp"

namespace lexattr {

struct RunConfig {
  std::string task = "synthetic";  // synthetic | overrule | casehold
  std::string model_name = "model";

  std::string train_path;
  std::string test_path;
  std::string vocab_path;
  std::string stopword_path;
  std::string phrase_path;
  std::string output_dir;
  // Additional vocabularies for overlap/coverage analytics, in file order.
  std::vector<std::pair<std::string, std::string>> extra_vocabs;

  ModelConfig model;

  int steps = 50;
  bool normalize_scores = false;
  double completeness_tolerance = 1e-3;

  std::size_t top_k = 50;
  double bin_width = 0.01;
  std::vector<std::pair<double, double>> windows = {{0.10, 0.25},
                                                    {-0.25, -0.10}};
  std::string freq_mode = "words";  // words | tokens (stop-word split input)

  std::size_t max_tokens = 512;
  std::size_t workers = 1;

  std::size_t report_max_examples = 25;
  double neutral_epsilon = 1e-4;

  SyntheticSpec synthetic;

  // Task value, path existence, numeric ranges. Throws ConfigError.
  void validate() const;
};

// Reads the documented JSON config; unknown keys are rejected so typos fail
// loudly. CLI flags override afterwards.
RunConfig load_run_config(const std::filesystem::path& path);

struct ManifestEntry {
  std::string path;  // relative to the output dir, '/' separated
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct Manifest {
  std::string created_at;  // the only field allowed to differ across reruns
  std::vector<ManifestEntry> files;
};

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const std::string& text);

// Runs the full pipeline: ingest, tokenize, train, evaluate, attribute,
// analytics, report, checkpoint, manifest. Throws ConfigError before any
// stage runs, StageError (carrying the stage name) afterwards.
Manifest run_pipeline(const RunConfig& config);

// --- artifact encodings shared by the pipeline and the CLI subcommands ---

std::string records_to_tsv(const std::vector<AttributionRecord>& records);
std::string token_scores_to_tsv(const std::vector<AttributionRecord>& records,
                                bool normalize = false);
// Reloads what records_to_tsv/token_scores_to_tsv wrote; per_dim matrices
// are not persisted, records come back with token scores only.
std::vector<AttributionRecord> records_from_files(
    const std::filesystem::path& records_path,
    const std::filesystem::path& scores_path);

std::string frequency_to_tsv(const FrequencyTable& table);
std::string partition_to_tsv(const PartitionReport& report, bool with_members);
std::string stopword_split_to_tsv(const StopwordSplit& split);
std::string histograms_to_tsv(const std::map<std::string, Histogram>& histograms);
std::string dist_stats_to_tsv(const std::map<std::string, DistStats>& stats);
std::string coverage_to_tsv(const std::vector<CoverageRow>& rows,
                            const std::vector<std::string>& vocab_names);
std::string correctness_to_tsv(const CorrectnessReport& report);
std::string phrase_counts_to_tsv(const std::vector<PhraseCount>& counts);
std::string phrase_hits_to_tsv(const std::vector<PhraseQuery>& queries,
                               const std::vector<std::vector<PhraseHit>>& hits);

}  // namespace lexattr

#endif  // LEXATTR_PIPELINE_HPP_
