#include "lexattr/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "lexattr/error.hpp"
#include "lexattr/io.hpp"

namespace lexattr {

void FrequencyTable::add(const std::string& token, std::uint64_t n) {
  counts[token] += n;
  total += n;
}

std::vector<std::pair<std::string, std::uint64_t>> FrequencyTable::top_k(
    std::size_t k) const {
  std::vector<std::pair<std::string, std::uint64_t>> items(counts.begin(),
                                                           counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (items.size() > k) items.resize(k);
  return items;
}

FrequencyTable token_frequencies(const std::vector<TokenizedText>& corpus) {
  FrequencyTable table;
  for (const TokenizedText& tok : corpus) {
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (tok.is_special[i]) continue;
      table.add(tok.token_strings[i]);
    }
  }
  return table;
}

FrequencyTable merged_word_frequencies(const std::vector<TokenizedText>& corpus) {
  FrequencyTable table;
  for (const TokenizedText& tok : corpus) {
    for (const MergedWord& word : merge_broken_words(tok)) {
      table.add(word.word);
    }
  }
  return table;
}

std::string PartitionReport::cell_label(std::uint32_t mask) const {
  if (mask == 0) return "(none)";
  std::string label;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (mask & (1u << i)) {
      if (!label.empty()) label += '+';
      label += names[i];
    }
  }
  return label;
}

void PartitionReport::check_conservation() const {
  std::uint64_t sum = 0;
  for (const auto& [mask, size] : cell_sizes) {
    (void)mask;
    sum += size;
  }
  if (sum != universe_size) {
    throw Error("partition cells sum to " + std::to_string(sum) +
                ", expected universe " + std::to_string(universe_size));
  }
  for (const auto& [mask, tokens] : members) {
    auto it = cell_sizes.find(mask);
    if (it == cell_sizes.end() || it->second != tokens.size()) {
      throw Error("partition member list inconsistent with cell size");
    }
  }
}

PartitionReport vocab_overlap(
    const std::vector<std::pair<std::string, const Vocabulary*>>& vocabs) {
  if (vocabs.size() < 2) throw Error("vocab_overlap needs >= 2 vocabularies");
  if (vocabs.size() > 31) throw Error("vocab_overlap supports at most 31 vocabularies");

  PartitionReport report;
  for (const auto& [name, vocab] : vocabs) {
    (void)vocab;
    report.names.push_back(name);
  }

  // Union of all token strings; assign each to the subset containing it.
  std::map<std::string, std::uint32_t> membership;
  for (std::size_t i = 0; i < vocabs.size(); ++i) {
    for (const std::string& token : vocabs[i].second->entries()) {
      membership[token] |= (1u << i);
    }
  }
  report.universe_size = membership.size();
  for (const auto& [token, mask] : membership) {
    report.cell_sizes[mask] += 1;
    report.members[mask].push_back(token);
  }
  return report;
}

std::set<std::string> load_stoplist(const std::filesystem::path& path) {
  std::set<std::string> stoplist;
  for (const std::string& line : read_lines(path)) {
    if (!line.empty()) stoplist.insert(line);
  }
  return stoplist;
}

StopwordSplit stopword_split(const std::vector<std::string>& tokens,
                             const std::set<std::string>& stoplist) {
  StopwordSplit split;
  const std::string prefix = Vocabulary::kContinuationPrefix;
  for (const std::string& token : tokens) {
    std::string word =
        token.rfind(prefix, 0) == 0 ? token.substr(prefix.size()) : token;
    if (stoplist.count(word)) {
      split.stop.push_back(token);
    } else {
      split.content.push_back(token);
    }
  }
  return split;
}

std::int64_t Histogram::bin_index(double score, double width) {
  return static_cast<std::int64_t>(std::floor(score / width));
}

void Histogram::add(double score) {
  if (range && (score < range->first || score > range->second)) return;
  bins[bin_index(score, bin_width)] += 1;
  total += 1;
}

Histogram make_histogram(const std::vector<double>& scores, double bin_width,
                         std::optional<std::pair<double, double>> range) {
  if (!(bin_width > 0.0)) throw NonpositiveBinError("bin width must be > 0");
  Histogram hist;
  hist.bin_width = bin_width;
  hist.range = range;
  for (double s : scores) hist.add(s);
  return hist;
}

std::map<std::string, Histogram> attribution_histograms(
    const std::vector<AttributionRecord>& records, double bin_width,
    std::optional<std::pair<double, double>> range) {
  if (!(bin_width > 0.0)) throw NonpositiveBinError("bin width must be > 0");
  std::map<std::string, Histogram> histograms;
  for (const AttributionRecord& record : records) {
    if (!record.ok()) continue;
    for (std::size_t i = 0; i < record.tokens.size(); ++i) {
      if (record.is_special[i]) continue;
      auto [it, inserted] = histograms.try_emplace(record.tokens[i]);
      if (inserted) {
        it->second.bin_width = bin_width;
        it->second.range = range;
      }
      it->second.add(record.token_scores[i]);
    }
  }
  return histograms;
}

DistStats distribution_stats(const std::vector<AttributionRecord>& group) {
  // Welford updates; the test suite cross-checks with a two-pass oracle.
  DistStats stats;
  double mean_p = 0.0, m2_p = 0.0;
  double mean_a = 0.0, m2_a = 0.0;
  std::size_t n = 0;
  for (const AttributionRecord& record : group) {
    if (!record.ok()) continue;
    ++n;
    double dp = record.prediction_probability - mean_p;
    mean_p += dp / static_cast<double>(n);
    m2_p += dp * (record.prediction_probability - mean_p);
    double da = record.attribution_sum - mean_a;
    mean_a += da / static_cast<double>(n);
    m2_a += da * (record.attribution_sum - mean_a);
  }
  if (n == 0) throw EmptyGroupError("no usable records in group");
  stats.count = n;
  stats.mean_probability = mean_p;
  stats.std_probability = std::sqrt(m2_p / static_cast<double>(n));
  stats.mean_attribution_sum = mean_a;
  stats.std_attribution_sum = std::sqrt(m2_a / static_cast<double>(n));
  return stats;
}

std::map<std::string, DistStats> distribution_stats_by_model(
    const std::map<std::string, std::vector<AttributionRecord>>& groups) {
  std::map<std::string, DistStats> out;
  for (const auto& [name, records] : groups) {
    out[name] = distribution_stats(records);
  }
  return out;
}

std::string scatter_export(const std::vector<AttributionRecord>& records) {
  std::string out = "prediction_probability\tattribution_sum\tcorrect\n";
  for (const AttributionRecord& record : records) {
    if (!record.ok()) continue;
    out += format_double(record.prediction_probability);
    out += '\t';
    out += format_double(record.attribution_sum);
    out += '\t';
    out += record.correct ? "1" : "0";
    out += '\n';
  }
  return out;
}

void CorrectnessMatrix::validate() const {
  if (models.empty()) throw RaggedMatrixError("correctness matrix has no models");
  for (const auto& row : rows) {
    if (row.size() != models.size()) {
      throw RaggedMatrixError("correctness row length " +
                              std::to_string(row.size()) + " != model count " +
                              std::to_string(models.size()));
    }
  }
}

CorrectnessReport correctness_sets(const CorrectnessMatrix& matrix) {
  matrix.validate();
  if (matrix.models.size() > 31) {
    throw Error("correctness_sets supports at most 31 models");
  }

  CorrectnessReport report;
  report.partition.names = matrix.models;
  report.partition.universe_size = matrix.rows.size();
  for (const auto& row : matrix.rows) {
    std::uint32_t mask = 0;
    for (std::size_t m = 0; m < row.size(); ++m) {
      if (row[m]) mask |= (1u << m);
    }
    report.partition.cell_sizes[mask] += 1;
    if (mask != 0) ++report.any_correct;
  }
  report.oracle_bound =
      matrix.rows.empty()
          ? 0.0
          : static_cast<double>(report.any_correct) /
                static_cast<double>(matrix.rows.size());
  return report;
}

std::vector<CoverageRow> model_token_coverage(
    const FrequencyTable& frequencies,
    const std::vector<std::pair<std::string, const Vocabulary*>>& vocabs,
    std::size_t k) {
  if (vocabs.empty()) throw Error("model_token_coverage needs >= 1 vocabulary");
  std::vector<CoverageRow> rows;
  for (const auto& [token, count] : frequencies.top_k(k)) {
    CoverageRow row;
    row.token = token;
    row.count = count;
    for (std::size_t i = 0; i < vocabs.size(); ++i) {
      if (vocabs[i].second->contains(token)) row.vocab_mask |= (1u << i);
    }
    row.missing_somewhere =
        row.vocab_mask != (vocabs.size() == 31 ? 0x7FFFFFFFu
                                               : (1u << vocabs.size()) - 1);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lexattr
