#include "lexattr/tokenizer.hpp"

#include <algorithm>

#include "lexattr/error.hpp"
#include "lexattr/unicode.hpp"

namespace lexattr {

std::size_t TokenizedText::content_size() const {
  std::size_t n = 0;
  for (auto s : is_special) {
    if (!s) ++n;
  }
  return n;
}

void TokenizedText::push(TokenId id, std::string token, int word,
                         bool special) {
  token_ids.push_back(id);
  token_strings.push_back(std::move(token));
  word_index.push_back(word);
  is_special.push_back(special ? 1 : 0);
}

void TokenizedText::validate() const {
  const std::size_t n = token_ids.size();
  if (token_strings.size() != n || word_index.size() != n ||
      is_special.size() != n) {
    throw Error("TokenizedText parallel lists differ in length");
  }
  int prev_word = -1;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_special[i]) {
      if (word_index[i] != kSpecialWordIndex) {
        throw Error("special token without sentinel word_index");
      }
      continue;
    }
    if (word_index[i] < prev_word) {
      throw Error("word_index decreases at position " + std::to_string(i));
    }
    bool continuation = token_strings[i].rfind(Vocabulary::kContinuationPrefix, 0) == 0;
    if (continuation && word_index[i] != prev_word) {
      throw Error("continuation token starts a word group at position " +
                  std::to_string(i));
    }
    prev_word = word_index[i];
  }
}

std::vector<std::string> basic_tokenize(std::string_view text) {
  std::u32string raw = uni::decode_utf8(text);

  // Drop controls, normalize whitespace, isolate CJK ideographs.
  std::u32string cleaned;
  cleaned.reserve(raw.size() + 8);
  for (uni::CodePoint cp : raw) {
    if (cp == 0 || cp == uni::kReplacement || uni::is_control(cp)) continue;
    if (uni::is_whitespace(cp)) {
      cleaned.push_back(U' ');
    } else if (uni::is_cjk_ideograph(cp)) {
      cleaned.push_back(U' ');
      cleaned.push_back(cp);
      cleaned.push_back(U' ');
    } else {
      cleaned.push_back(cp);
    }
  }

  std::vector<std::string> words;
  std::u32string current;
  auto flush = [&] {
    if (!current.empty()) {
      words.push_back(uni::encode_utf8(current));
      current.clear();
    }
  };

  std::size_t i = 0;
  while (i < cleaned.size()) {
    // One whitespace-delimited chunk at a time.
    while (i < cleaned.size() && cleaned[i] == U' ') ++i;
    std::size_t j = i;
    while (j < cleaned.size() && cleaned[j] != U' ') ++j;
    if (i == j) break;

    std::u32string lowered;
    for (std::size_t k = i; k < j; ++k) uni::lower_append(cleaned[k], lowered);

    std::u32string stripped;
    stripped.reserve(lowered.size());
    for (uni::CodePoint cp : lowered) {
      if (uni::is_combining_mark(cp)) continue;
      stripped.push_back(uni::decomposed_base(cp));
    }

    for (uni::CodePoint cp : stripped) {
      if (uni::is_punctuation(cp)) {
        flush();
        words.push_back(uni::encode_utf8(std::u32string(1, cp)));
      } else {
        current.push_back(cp);
      }
    }
    flush();
    i = j;
  }
  return words;
}

std::vector<std::string> wordpiece_word(const std::string& word,
                                        const Vocabulary& vocab) {
  // Code-point boundaries as byte offsets; matching never cuts a character.
  std::vector<std::size_t> bounds;
  bounds.push_back(0);
  for (std::size_t i = 0; i < word.size();) {
    unsigned char b = static_cast<unsigned char>(word[i]);
    std::size_t len = b < 0x80 ? 1 : (b & 0xE0) == 0xC0 ? 2 : (b & 0xF0) == 0xE0 ? 3 : 4;
    i = std::min(word.size(), i + len);
    bounds.push_back(i);
  }
  const std::size_t ncp = bounds.size() - 1;
  if (ncp == 0 || ncp > kMaxWordPieceChars) return {Vocabulary::kUnk};

  std::vector<std::string> pieces;
  std::size_t start = 0;
  while (start < ncp) {
    std::size_t end = ncp;
    std::string match;
    while (start < end) {
      std::string sub = word.substr(bounds[start], bounds[end] - bounds[start]);
      if (start > 0) sub.insert(0, Vocabulary::kContinuationPrefix);
      if (vocab.contains(sub)) {
        match = std::move(sub);
        break;
      }
      --end;
    }
    if (match.empty()) return {Vocabulary::kUnk};
    pieces.push_back(std::move(match));
    start = end;
  }
  return pieces;
}

TokenizedText tokenize(std::string_view text, const Vocabulary& vocab,
                       bool add_specials) {
  TokenizedText tok;
  if (add_specials) {
    auto cls = vocab.cls_id();
    auto sep = vocab.sep_id();
    if (!cls || !sep) {
      throw Error("vocabulary lacks [CLS]/[SEP]; cannot add special tokens");
    }
    tok.push(*cls, Vocabulary::kCls, kSpecialWordIndex, true);
  }

  std::vector<std::string> words = basic_tokenize(text);
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    for (std::string& piece : wordpiece_word(words[wi], vocab)) {
      TokenId id = vocab.id_of(piece).value_or(vocab.unk_id());
      tok.push(id, std::move(piece), static_cast<int>(wi), false);
    }
  }

  if (add_specials) {
    tok.push(*vocab.sep_id(), Vocabulary::kSep, kSpecialWordIndex, true);
  }
  return tok;
}

TokenizedText truncate_tokens(const TokenizedText& tok,
                              std::size_t max_tokens) {
  if (tok.size() <= max_tokens) return tok;
  TokenizedText out;
  bool keep_tail_sep =
      max_tokens >= 2 && !tok.is_special.empty() && tok.is_special.back();
  std::size_t head = keep_tail_sep ? max_tokens - 1 : max_tokens;
  for (std::size_t i = 0; i < head; ++i) {
    out.push(tok.token_ids[i], tok.token_strings[i], tok.word_index[i],
             tok.is_special[i] != 0);
  }
  if (keep_tail_sep) {
    std::size_t last = tok.size() - 1;
    out.push(tok.token_ids[last], tok.token_strings[last],
             tok.word_index[last], true);
  }
  return out;
}

std::vector<MergedWord> merge_broken_words(const TokenizedText& tok) {
  std::vector<MergedWord> words;
  MergedWord current;
  bool open = false;
  auto close = [&] {
    if (open) {
      words.push_back(current);
      open = false;
    }
  };

  const std::string prefix = Vocabulary::kContinuationPrefix;
  for (std::size_t i = 0; i < tok.size(); ++i) {
    if (tok.is_special[i]) {
      close();
      continue;
    }
    const std::string& piece = tok.token_strings[i];
    if (piece.rfind(prefix, 0) == 0) {
      if (!open) {
        throw LeadingContinuationError(
            "continuation piece '" + piece + "' at position " +
            std::to_string(i) + " has no head token");
      }
      current.word += piece.substr(prefix.size());
      current.end = i + 1;
    } else {
      close();
      current = MergedWord{piece, i, i + 1};
      open = true;
    }
  }
  close();
  return words;
}

}  // namespace lexattr
