#ifndef LEXATTR_ANALYTICS_HPP_
#define LEXATTR_ANALYTICS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lexattr/attribution.hpp"
#include "lexattr/tokenizer.hpp"
#include "lexattr/vocab.hpp"

namespace lexattr {

struct FrequencyTable {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  void add(const std::string& token, std::uint64_t n = 1);
  // Count descending, token ascending on ties.
  std::vector<std::pair<std::string, std::uint64_t>> top_k(std::size_t k) const;
};

// Exact token counts over a corpus, special tokens excluded.
FrequencyTable token_frequencies(const std::vector<TokenizedText>& corpus);
// Counts of words reassembled by merge_broken_words.
FrequencyTable merged_word_frequencies(const std::vector<TokenizedText>& corpus);

// Partition of a universe by which named sources contain each element.
// Cells are keyed by a bitmask over `names` (bit i = names[i]).
struct PartitionReport {
  std::vector<std::string> names;
  std::map<std::uint32_t, std::uint64_t> cell_sizes;
  std::map<std::uint32_t, std::vector<std::string>> members;  // token partitions
  std::uint64_t universe_size = 0;

  std::string cell_label(std::uint32_t mask) const;  // "a+b+c", "(none)"
  void check_conservation() const;                   // throws Error
};

// Every token of the union assigned to the cell naming exactly the
// vocabularies containing it. Requires >= 2 vocabularies.
PartitionReport vocab_overlap(
    const std::vector<std::pair<std::string, const Vocabulary*>>& vocabs);

std::set<std::string> load_stoplist(const std::filesystem::path& path);

struct StopwordSplit {
  std::vector<std::string> stop;
  std::vector<std::string> content;
};

// Partition by stoplist membership after decoding tokens to words (the
// "##" continuation prefix is stripped before lookup).
StopwordSplit stopword_split(const std::vector<std::string>& tokens,
                             const std::set<std::string>& stoplist);

struct Histogram {
  double bin_width = 0.01;
  // Closed window applied before binning; scores outside are dropped.
  std::optional<std::pair<double, double>> range;
  std::map<std::int64_t, std::uint64_t> bins;  // k covers [k*w, (k+1)*w)
  std::uint64_t total = 0;                     // items binned (in range)

  static std::int64_t bin_index(double score, double width);
  void add(double score);
};

Histogram make_histogram(const std::vector<double>& scores, double bin_width,
                         std::optional<std::pair<double, double>> range = {});

// Per-token histograms of attribution scores across records. Failed records
// and special-token positions are skipped.
std::map<std::string, Histogram> attribution_histograms(
    const std::vector<AttributionRecord>& records, double bin_width,
    std::optional<std::pair<double, double>> range = {});

struct DistStats {
  std::size_t count = 0;
  double mean_probability = 0.0;
  double std_probability = 0.0;  // population standard deviation
  double mean_attribution_sum = 0.0;
  double std_attribution_sum = 0.0;
};

// Throws EmptyGroupError when a group has no usable records.
DistStats distribution_stats(const std::vector<AttributionRecord>& group);
std::map<std::string, DistStats> distribution_stats_by_model(
    const std::map<std::string, std::vector<AttributionRecord>>& groups);

// Plot-ready TSV: prediction_probability, attribution_sum, correct; one row
// per successful record, input order.
std::string scatter_export(const std::vector<AttributionRecord>& records);

struct CorrectnessMatrix {
  std::vector<std::string> models;
  // rows[example][model] = 1 when that model classified the example right.
  std::vector<std::vector<std::uint8_t>> rows;

  void validate() const;  // throws RaggedMatrixError
};

struct CorrectnessReport {
  PartitionReport partition;  // cells over examples; mask 0 = none correct
  std::uint64_t any_correct = 0;
  double oracle_bound = 0.0;  // |union of correct sets| / N
};

CorrectnessReport correctness_sets(const CorrectnessMatrix& matrix);

struct CoverageRow {
  std::string token;
  std::uint64_t count = 0;
  std::uint32_t vocab_mask = 0;  // bit i = vocabs[i] contains the token
  bool missing_somewhere = false;
};

// Top-k corpus tokens against a set of vocabularies.
std::vector<CoverageRow> model_token_coverage(
    const FrequencyTable& frequencies,
    const std::vector<std::pair<std::string, const Vocabulary*>>& vocabs,
    std::size_t k);

}  // namespace lexattr

#endif  // LEXATTR_ANALYTICS_HPP_
