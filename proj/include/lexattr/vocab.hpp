#ifndef LEXATTR_VOCAB_HPP_
#define LEXATTR_VOCAB_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lexattr {

using TokenId = std::int32_t;

// Token-string <-> id bijection; the line index in the vocab file is the id.
// Immutable after construction and safe to share across threads.
class Vocabulary {
 public:
  static constexpr const char* kContinuationPrefix = "##";
  static constexpr const char* kPad = "[PAD]";
  static constexpr const char* kUnk = "[UNK]";
  static constexpr const char* kCls = "[CLS]";
  static constexpr const char* kSep = "[SEP]";
  static constexpr const char* kMask = "[MASK]";

  // `origin` only flavors error messages. Throws DuplicateTokenError /
  // MissingUnkError.
  static Vocabulary from_lines(std::vector<std::string> lines,
                               const std::string& origin = "<memory>");

  std::size_t size() const { return entries_.size(); }
  const std::vector<std::string>& entries() const { return entries_; }
  const std::string& token(TokenId id) const { return entries_.at(id); }

  bool contains(const std::string& token) const {
    return ids_.find(token) != ids_.end();
  }
  std::optional<TokenId> id_of(const std::string& token) const;

  TokenId unk_id() const { return unk_id_; }
  std::optional<TokenId> pad_id() const { return opt_id(kPad); }
  std::optional<TokenId> cls_id() const { return opt_id(kCls); }
  std::optional<TokenId> sep_id() const { return opt_id(kSep); }

  // The standard special markers that are actually present in this vocab.
  const std::unordered_set<std::string>& special_tokens() const {
    return specials_;
  }
  bool is_special_token(const std::string& token) const {
    return specials_.count(token) > 0;
  }

 private:
  std::optional<TokenId> opt_id(const char* token) const;

  std::vector<std::string> entries_;
  std::unordered_map<std::string, TokenId> ids_;
  std::unordered_set<std::string> specials_;
  TokenId unk_id_ = -1;
};

// One token per line, UTF-8, id = line index. A trailing blank line (the
// usual final newline) is ignored. Throws Error if unreadable,
// DuplicateTokenError (with line number) or MissingUnkError.
Vocabulary load_vocab(const std::filesystem::path& path);

}  // namespace lexattr

#endif  // LEXATTR_VOCAB_HPP_
