#include "lexattr/phrase.hpp"

#include <algorithm>

#include "lexattr/error.hpp"
#include "lexattr/io.hpp"

namespace lexattr {

PhraseQuery make_phrase_query(const std::string& phrase,
                              const Vocabulary& vocab) {
  TokenizedText tok = tokenize(phrase, vocab, /*add_specials=*/false);
  if (tok.empty()) {
    throw EmptyQueryError("phrase '" + phrase + "' tokenizes to nothing");
  }
  PhraseQuery query;
  query.label = phrase;
  query.token_ids = tok.token_ids;
  query.degraded =
      std::find(tok.token_strings.begin(), tok.token_strings.end(),
                Vocabulary::kUnk) != tok.token_strings.end();
  return query;
}

std::vector<PhraseQuery> load_phrase_file(const std::filesystem::path& path,
                                          const Vocabulary& vocab) {
  std::vector<PhraseQuery> queries;
  for (const std::string& line : read_lines(path)) {
    if (line.empty()) continue;
    queries.push_back(make_phrase_query(line, vocab));
  }
  return queries;
}

std::vector<PhraseHit> phrase_search(const std::vector<TokenizedText>& corpus,
                                     const PhraseQuery& query) {
  if (query.token_ids.empty()) throw EmptyQueryError("empty phrase query");

  std::vector<PhraseHit> hits;
  const auto& needle = query.token_ids;
  for (std::size_t ex = 0; ex < corpus.size(); ++ex) {
    const auto& ids = corpus[ex].token_ids;
    if (ids.size() < needle.size()) continue;
    for (std::size_t off = 0; off + needle.size() <= ids.size(); ++off) {
      if (std::equal(needle.begin(), needle.end(), ids.begin() + off)) {
        hits.push_back({ex, off});
      }
    }
  }
  return hits;
}

std::vector<PhraseCount> phrase_frequency(
    const std::vector<TokenizedText>& corpus,
    const std::vector<PhraseQuery>& queries) {
  std::vector<PhraseCount> counts;
  counts.reserve(queries.size());
  for (const PhraseQuery& query : queries) {
    std::vector<PhraseHit> hits = phrase_search(corpus, query);
    PhraseCount count;
    count.label = query.label;
    count.hits = hits.size();
    count.degraded = query.degraded;
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
      if (i == 0 || hits[i].example_index != hits[i - 1].example_index) {
        ++distinct;
      }
    }
    count.examples = distinct;
    counts.push_back(std::move(count));
  }
  std::sort(counts.begin(), counts.end(),
            [](const PhraseCount& a, const PhraseCount& b) {
              if (a.hits != b.hits) return a.hits > b.hits;
              return a.label < b.label;
            });
  return counts;
}

}  // namespace lexattr
