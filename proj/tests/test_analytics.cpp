#include <doctest.h>

#include <cmath>
#include <map>

#include "lexattr/analytics.hpp"
#include "lexattr/error.hpp"
#include "lexattr/io.hpp"
#include "lexattr/rng.hpp"

using namespace lexattr;

namespace {

TokenizedText words(const std::vector<std::string>& tokens) {
  TokenizedText tok;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    tok.push(static_cast<TokenId>(i), tokens[i], static_cast<int>(i), false);
  }
  return tok;
}

AttributionRecord record_with(const std::string& id, double prob, double sum,
                              bool correct) {
  AttributionRecord r;
  r.example_id = id;
  r.prediction_probability = prob;
  r.attribution_sum = sum;
  r.correct = correct;
  return r;
}

Vocabulary vocab_of(std::vector<std::string> extra) {
  std::vector<std::string> lines{"[PAD]", "[UNK]", "[CLS]", "[SEP]"};
  lines.insert(lines.end(), extra.begin(), extra.end());
  return Vocabulary::from_lines(std::move(lines));
}

}  // namespace

TEST_CASE("token_frequencies counts exactly, specials excluded") {
  std::vector<TokenizedText> corpus{words({"a", "a", "b"})};
  corpus[0].push(9, "[CLS]", kSpecialWordIndex, true);
  FrequencyTable table = token_frequencies(corpus);
  CHECK(table.counts.at("a") == 2);
  CHECK(table.counts.at("b") == 1);
  CHECK(table.total == 3);

  FrequencyTable empty = token_frequencies({});
  CHECK(empty.counts.empty());
  CHECK(empty.total == 0);
}

TEST_CASE("token_frequencies equals a brute-force recount on random corpora") {
  Rng rng(2025);
  std::vector<std::string> alphabet = {"the", "court", "##s", "law", "v", "."};
  std::vector<TokenizedText> corpus;
  std::map<std::string, std::uint64_t> recount;
  std::uint64_t total = 0;
  for (int ex = 0; ex < 200; ++ex) {
    std::vector<std::string> tokens;
    std::size_t len = rng.index(100);
    for (std::size_t i = 0; i < len; ++i) {
      tokens.push_back(alphabet[rng.index(alphabet.size())]);
      recount[tokens.back()] += 1;
      ++total;
    }
    corpus.push_back(words(tokens));
  }
  FrequencyTable table = token_frequencies(corpus);
  CHECK(table.total == total);
  CHECK(table.counts.size() == recount.size());
  for (const auto& [token, count] : recount) {
    CHECK(table.counts.at(token) == count);
  }
}

TEST_CASE("top_k sorts by count then token") {
  FrequencyTable table;
  table.add("b", 5);
  table.add("a", 5);
  table.add("c", 9);
  auto top = table.top_k(2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].first == "c");
  CHECK(top[1].first == "a");  // tie broken lexicographically
}

TEST_CASE("merged_word_frequencies counts reassembled words") {
  std::vector<TokenizedText> corpus{words({"over", "##rul", "##ing", "court"})};
  FrequencyTable table = merged_word_frequencies(corpus);
  CHECK(table.counts.at("overruling") == 1);
  CHECK(table.counts.at("court") == 1);
  CHECK(table.total == 2);
}

TEST_CASE("vocab_overlap: identical vocabularies collapse to one cell") {
  Vocabulary a = vocab_of({"the", "court"});
  Vocabulary b = vocab_of({"the", "court"});
  PartitionReport report = vocab_overlap({{"a", &a}, {"b", &b}});
  report.check_conservation();
  CHECK(report.universe_size == 6);
  REQUIRE(report.cell_sizes.size() == 1);
  CHECK(report.cell_sizes.at(0b11) == 6);
  CHECK(report.cell_label(0b11) == "a+b");
}

TEST_CASE("vocab_overlap: disjoint extra tokens split into own cells") {
  Vocabulary a = vocab_of({"alpha"});
  Vocabulary b = vocab_of({"beta"});
  PartitionReport report = vocab_overlap({{"a", &a}, {"b", &b}});
  report.check_conservation();
  CHECK(report.universe_size == 6);  // 4 specials shared + alpha + beta
  CHECK(report.cell_sizes.at(0b01) == 1);
  CHECK(report.cell_sizes.at(0b10) == 1);
  CHECK(report.cell_sizes.at(0b11) == 4);
  CHECK(report.members.at(0b01) == std::vector<std::string>{"alpha"});
}

TEST_CASE("vocab_overlap partition conservation on random fixtures") {
  Rng rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + rng.index(3);
    std::vector<Vocabulary> storage;
    std::vector<std::pair<std::string, const Vocabulary*>> named;
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::string> extra;
      std::size_t count = rng.index(40);
      for (std::size_t i = 0; i < count; ++i) {
        extra.push_back("tok" + std::to_string(rng.index(60)));
      }
      std::sort(extra.begin(), extra.end());
      extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
      storage.push_back(vocab_of(extra));
    }
    for (std::size_t v = 0; v < n; ++v) {
      named.emplace_back("v" + std::to_string(v), &storage[v]);
    }
    PartitionReport report = vocab_overlap(named);
    report.check_conservation();

    // Disjointness double-check by re-inserting every member token.
    std::set<std::string> seen;
    for (const auto& [mask, tokens] : report.members) {
      (void)mask;
      for (const std::string& token : tokens) {
        CHECK(seen.insert(token).second);
      }
    }
    CHECK(seen.size() == report.universe_size);
  }
}

TEST_CASE("stopword_split partitions by membership after decoding") {
  std::set<std::string> stoplist{"the"};
  StopwordSplit split = stopword_split({"the", "court"}, stoplist);
  CHECK(split.stop == std::vector<std::string>{"the"});
  CHECK(split.content == std::vector<std::string>{"court"});

  // Continuation prefix is stripped before lookup.
  StopwordSplit cont = stopword_split({"##the", "##court"}, stoplist);
  CHECK(cont.stop == std::vector<std::string>{"##the"});

  StopwordSplit none = stopword_split({"a", "b"}, {});
  CHECK(none.stop.empty());
  CHECK(none.content.size() == 2);
}

TEST_CASE("stopword_split sizes equal brute-force membership count") {
  auto stoplist_path =
      std::filesystem::path(LEXATTR_SOURCE_DIR) / "data" / "stopwords_en.txt";
  std::set<std::string> stoplist = load_stoplist(stoplist_path);
  CHECK(stoplist.size() == 179);

  std::vector<std::string> tokens = {"the",  "court", "of",    "law", "a",
                                     "and",  "judge", "##ing", "was", "state",
                                     "from", "under", "plaintiff"};
  StopwordSplit split = stopword_split(tokens, stoplist);
  std::size_t stop_count = 0;
  for (const std::string& token : tokens) {
    std::string word = token.rfind("##", 0) == 0 ? token.substr(2) : token;
    if (stoplist.count(word)) ++stop_count;
  }
  CHECK(split.stop.size() == stop_count);
  CHECK(split.content.size() == tokens.size() - stop_count);
}

TEST_CASE("histogram bins are half-open at bin width 0.01") {
  Histogram hist = make_histogram({0.005, 0.004}, 0.01);
  CHECK(hist.bins.at(0) == 2);
  CHECK(hist.total == 2);

  // Negative scores land in negative bins.
  Histogram negatives = make_histogram({-0.001, -0.011, 0.0}, 0.01);
  CHECK(negatives.bins.at(-1) == 1);
  CHECK(negatives.bins.at(-2) == 1);
  CHECK(negatives.bins.at(0) == 1);

  // Exact bin edge belongs to the upper bin.
  Histogram edge = make_histogram({0.01}, 0.01);
  CHECK(edge.bins.at(1) == 1);

  CHECK_THROWS_AS(make_histogram({1.0}, 0.0), NonpositiveBinError);
}

TEST_CASE("histogram window filters before binning") {
  Histogram hist = make_histogram({0.05, 0.12}, 0.01, {{0.10, 0.25}});
  CHECK(hist.total == 1);
  CHECK(hist.bins.size() == 1);
  CHECK(hist.bins.at(12) == 1);
}

TEST_CASE("histogram conservation: every score lands in exactly one bin") {
  Rng rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> scores;
    std::size_t n = rng.index(500);
    for (std::size_t i = 0; i < n; ++i) scores.push_back(rng.uniform(-0.5, 0.5));
    Histogram hist = make_histogram(scores, 0.01);
    std::uint64_t total = 0;
    for (const auto& [bin, count] : hist.bins) {
      (void)bin;
      total += count;
    }
    CHECK(total == scores.size());
    CHECK(hist.total == scores.size());
  }
}

TEST_CASE("attribution_histograms bins per token and skips specials") {
  AttributionRecord r = record_with("0", 0.9, 0.2, true);
  r.tokens = {"[CLS]", "the", "court", "the", "[SEP]"};
  r.is_special = {1, 0, 0, 0, 1};
  r.token_scores = {0.5, 0.011, -0.02, 0.013, 0.5};
  auto histograms = attribution_histograms({r}, 0.01);
  CHECK(histograms.count("[CLS]") == 0);
  CHECK(histograms.at("the").total == 2);
  CHECK(histograms.at("the").bins.at(1) == 2);  // 0.011 and 0.013
  CHECK(histograms.at("court").bins.at(-2) == 1);
}

TEST_CASE("distribution stats match a two-pass oracle within 1e-12") {
  Rng rng(99);
  std::vector<AttributionRecord> group;
  for (int i = 0; i < 1000; ++i) {
    group.push_back(record_with(std::to_string(i), rng.uniform(),
                                rng.uniform(-2.0, 2.0), rng.index(2) == 1));
  }
  DistStats stats = distribution_stats(group);

  // Independent two-pass computation.
  double mean_p = 0.0, mean_a = 0.0;
  for (const auto& r : group) {
    mean_p += r.prediction_probability;
    mean_a += r.attribution_sum;
  }
  mean_p /= group.size();
  mean_a /= group.size();
  double var_p = 0.0, var_a = 0.0;
  for (const auto& r : group) {
    var_p += (r.prediction_probability - mean_p) * (r.prediction_probability - mean_p);
    var_a += (r.attribution_sum - mean_a) * (r.attribution_sum - mean_a);
  }
  var_p /= group.size();
  var_a /= group.size();

  CHECK(std::abs(stats.mean_probability - mean_p) <= 1e-12);
  CHECK(std::abs(stats.std_probability - std::sqrt(var_p)) <= 1e-12);
  CHECK(std::abs(stats.mean_attribution_sum - mean_a) <= 1e-12);
  CHECK(std::abs(stats.std_attribution_sum - std::sqrt(var_a)) <= 1e-12);
  CHECK(stats.count == 1000);
}

TEST_CASE("distribution stats edge cases") {
  std::vector<AttributionRecord> constant(5, record_with("0", 0.7, 1.5, true));
  DistStats stats = distribution_stats(constant);
  CHECK(stats.std_probability == 0.0);
  CHECK(stats.std_attribution_sum == 0.0);

  std::vector<AttributionRecord> pair{record_with("0", 0.0, 0.0, false),
                                      record_with("1", 1.0, 1.0, true)};
  DistStats half = distribution_stats(pair);
  CHECK(half.mean_probability == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(half.std_probability == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(distribution_stats({}), EmptyGroupError);
}

TEST_CASE("scatter export: one row per record, fields match the source") {
  std::vector<AttributionRecord> records;
  Rng rng(5);
  for (int i = 0; i < 25; ++i) {
    records.push_back(record_with(std::to_string(i), rng.uniform(),
                                  rng.uniform(-1.0, 1.0), rng.index(2) == 1));
  }
  std::string tsv = scatter_export(records);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < tsv.size()) {
    std::size_t nl = tsv.find('\n', start);
    lines.push_back(tsv.substr(start, nl - start));
    start = nl + 1;
  }
  REQUIRE(lines.size() == 26);  // header + 25 rows
  CHECK(lines[0] == "prediction_probability\tattribution_sum\tcorrect");
  // Spot-check five rows against their records.
  for (std::size_t i : {0ul, 5ul, 12ul, 19ul, 24ul}) {
    std::vector<std::string> fields = split_tsv(lines[i + 1]);
    REQUIRE(fields.size() == 3);
    CHECK(fields[0] == format_double(records[i].prediction_probability));
    CHECK(fields[1] == format_double(records[i].attribution_sum));
    CHECK(fields[2] == (records[i].correct ? "1" : "0"));
  }

  CHECK(scatter_export({}) == "prediction_probability\tattribution_sum\tcorrect\n");
}

TEST_CASE("correctness_sets trivial cases") {
  CorrectnessMatrix one;
  one.models = {"m"};
  one.rows = {{1}, {1}, {1}};
  CorrectnessReport report = correctness_sets(one);
  CHECK(report.oracle_bound == 1.0);
  CHECK(report.partition.cell_sizes.at(1) == 3);

  CorrectnessMatrix disjoint;
  disjoint.models = {"a", "b"};
  disjoint.rows = {{1, 0}, {0, 1}, {1, 0}, {0, 1}};
  CorrectnessReport halves = correctness_sets(disjoint);
  CHECK(halves.oracle_bound == 1.0);
  CHECK(halves.partition.cell_sizes.at(0b01) == 2);
  CHECK(halves.partition.cell_sizes.at(0b10) == 2);

  CorrectnessMatrix ragged;
  ragged.models = {"a", "b"};
  ragged.rows = {{1}};
  CHECK_THROWS_AS(correctness_sets(ragged), RaggedMatrixError);
}

TEST_CASE("correctness_sets matches brute-force enumeration on random matrices") {
  Rng rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t models = 1 + rng.index(4);
    std::size_t examples = rng.index(500);
    CorrectnessMatrix matrix;
    for (std::size_t m = 0; m < models; ++m) {
      matrix.models.push_back("m" + std::to_string(m));
    }
    for (std::size_t e = 0; e < examples; ++e) {
      std::vector<std::uint8_t> row;
      for (std::size_t m = 0; m < models; ++m) {
        row.push_back(static_cast<std::uint8_t>(rng.index(2)));
      }
      matrix.rows.push_back(row);
    }
    CorrectnessReport report = correctness_sets(matrix);
    report.partition.check_conservation();

    // Power-set enumeration oracle.
    std::map<std::uint32_t, std::uint64_t> cells;
    std::uint64_t any = 0;
    for (const auto& row : matrix.rows) {
      std::uint32_t mask = 0;
      for (std::size_t m = 0; m < row.size(); ++m) {
        if (row[m]) mask |= (1u << m);
      }
      cells[mask] += 1;
      if (mask) ++any;
    }
    CHECK(report.partition.cell_sizes == cells);
    CHECK(report.any_correct == any);
    if (examples > 0) {
      CHECK(report.oracle_bound ==
            doctest::Approx(double(any) / double(examples)).epsilon(1e-15));
      // Oracle bound dominates every single model's accuracy.
      for (std::size_t m = 0; m < models; ++m) {
        std::uint64_t correct = 0;
        for (const auto& row : matrix.rows) correct += row[m];
        CHECK(report.oracle_bound >= double(correct) / double(examples));
      }
    }
  }
}

TEST_CASE("model_token_coverage flags membership per vocabulary") {
  Vocabulary a = vocab_of({"the", "court", "##ellant"});
  Vocabulary b = vocab_of({"the", "court"});
  Vocabulary c = vocab_of({"the"});
  FrequencyTable table;
  table.add("the", 100);
  table.add("court", 50);
  table.add("##ellant", 10);
  table.add("zzz", 5);

  auto rows = model_token_coverage(table, {{"a", &a}, {"b", &b}, {"c", &c}}, 4);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].token == "the");
  CHECK(rows[0].vocab_mask == 0b111);
  CHECK(!rows[0].missing_somewhere);
  CHECK(rows[1].token == "court");
  CHECK(rows[1].vocab_mask == 0b011);
  CHECK(rows[1].missing_somewhere);
  CHECK(rows[2].token == "##ellant");
  CHECK(rows[2].vocab_mask == 0b001);
  CHECK(rows[3].token == "zzz");
  CHECK(rows[3].vocab_mask == 0);
  CHECK(rows[3].missing_somewhere);

  // Membership equals direct set lookups.
  for (const CoverageRow& row : rows) {
    CHECK(((row.vocab_mask & 1u) != 0) == a.contains(row.token));
    CHECK(((row.vocab_mask & 2u) != 0) == b.contains(row.token));
    CHECK(((row.vocab_mask & 4u) != 0) == c.contains(row.token));
  }
}
