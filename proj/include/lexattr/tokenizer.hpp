#ifndef LEXATTR_TOKENIZER_HPP_
#define LEXATTR_TOKENIZER_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lexattr/vocab.hpp"

namespace lexattr {

// Words longer than this (in code points) tokenize to [UNK] unchanged.
constexpr std::size_t kMaxWordPieceChars = 100;

// Sentinel word_index carried by [CLS]/[SEP] positions.
constexpr int kSpecialWordIndex = -1;

struct TokenizedText {
  std::vector<TokenId> token_ids;
  std::vector<std::string> token_strings;
  // 0-based source word per token; kSpecialWordIndex on special positions.
  std::vector<int> word_index;
  std::vector<std::uint8_t> is_special;

  std::size_t size() const { return token_ids.size(); }
  std::size_t content_size() const;  // non-special positions
  bool empty() const { return token_ids.empty(); }

  void push(TokenId id, std::string token, int word, bool special);

  // Enforces the structural invariants: parallel lengths, non-decreasing
  // word_index across non-special positions, no "##" piece opening a word
  // group. Throws Error on violation.
  void validate() const;
};

// Uncased pre-tokenization: drops control characters, treats every
// whitespace run as one separator, lowercases, strips accents (NFD, marks
// removed), isolates each punctuation character, and spaces out CJK
// ideographs. Empty input yields an empty list.
std::vector<std::string> basic_tokenize(std::string_view text);

// Greedy longest-prefix WordPiece over one normalized word. Non-initial
// pieces carry the "##" prefix. Returns {"[UNK]"} when no match exists at
// some position or the word exceeds kMaxWordPieceChars code points.
std::vector<std::string> wordpiece_word(const std::string& word,
                                        const Vocabulary& vocab);

// basic_tokenize + wordpiece_word over each word. With add_specials, wraps
// the sequence in [CLS] ... [SEP] (both flagged special, word_index
// sentinel); requires those tokens in the vocab.
TokenizedText tokenize(std::string_view text, const Vocabulary& vocab,
                       bool add_specials);

// Caps a sequence at max_tokens positions, preserving a trailing [SEP].
TokenizedText truncate_tokens(const TokenizedText& tok, std::size_t max_tokens);

struct MergedWord {
  std::string word;        // pieces concatenated, "##" prefixes stripped
  std::size_t begin = 0;   // token span [begin, end)
  std::size_t end = 0;
};

// Reverses WordPiece splits: each maximal run of one non-"##" token plus
// its "##" continuations becomes one word. Special tokens are excluded and
// break runs. Throws LeadingContinuationError if a "##" piece has no head.
std::vector<MergedWord> merge_broken_words(const TokenizedText& tok);

}  // namespace lexattr

#endif  // LEXATTR_TOKENIZER_HPP_
