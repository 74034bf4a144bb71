#ifndef LEXATTR_PHRASE_HPP_
#define LEXATTR_PHRASE_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "lexattr/tokenizer.hpp"
#include "lexattr/vocab.hpp"

namespace lexattr {

struct PhraseQuery {
  std::string label;               // the source phrase
  std::vector<TokenId> token_ids;  // tokenization of the phrase, no specials
  bool degraded = false;           // some word tokenized to [UNK]
};

struct PhraseHit {
  std::size_t example_index = 0;
  std::size_t token_offset = 0;
  bool operator==(const PhraseHit&) const = default;
};

// Tokenizes a phrase with the same vocab as the corpus it will be searched
// against. Throws EmptyQueryError if the phrase produces no tokens.
PhraseQuery make_phrase_query(const std::string& phrase,
                              const Vocabulary& vocab);

// One phrase per line; blank lines are skipped.
std::vector<PhraseQuery> load_phrase_file(const std::filesystem::path& path,
                                          const Vocabulary& vocab);

// All exact contiguous occurrences (overlaps included), ordered by example
// then offset.
std::vector<PhraseHit> phrase_search(const std::vector<TokenizedText>& corpus,
                                     const PhraseQuery& query);

struct PhraseCount {
  std::string label;
  std::size_t hits = 0;
  std::size_t examples = 0;  // distinct examples containing the phrase
  bool degraded = false;
};

// Frequency table over a query list, sorted by hits descending then label.
std::vector<PhraseCount> phrase_frequency(
    const std::vector<TokenizedText>& corpus,
    const std::vector<PhraseQuery>& queries);

}  // namespace lexattr

#endif  // LEXATTR_PHRASE_HPP_
