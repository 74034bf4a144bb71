#include "lexattr/vocab.hpp"

#include "lexattr/error.hpp"
#include "lexattr/io.hpp"

namespace lexattr {

Vocabulary Vocabulary::from_lines(std::vector<std::string> lines,
                                  const std::string& origin) {
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  Vocabulary vocab;
  vocab.entries_ = std::move(lines);
  vocab.ids_.reserve(vocab.entries_.size());
  for (std::size_t i = 0; i < vocab.entries_.size(); ++i) {
    auto [it, inserted] =
        vocab.ids_.emplace(vocab.entries_[i], static_cast<TokenId>(i));
    if (!inserted) {
      throw DuplicateTokenError("duplicate token '" + vocab.entries_[i] +
                                "' at line " + std::to_string(i + 1) + " of " +
                                origin + " (first at line " +
                                std::to_string(it->second + 1) + ")");
    }
  }

  auto unk = vocab.ids_.find(kUnk);
  if (unk == vocab.ids_.end()) {
    throw MissingUnkError("vocabulary " + origin + " does not contain " + kUnk);
  }
  vocab.unk_id_ = unk->second;

  for (const char* s : {kPad, kUnk, kCls, kSep, kMask}) {
    if (vocab.ids_.count(s)) vocab.specials_.insert(s);
  }
  return vocab;
}

std::optional<TokenId> Vocabulary::id_of(const std::string& token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<TokenId> Vocabulary::opt_id(const char* token) const {
  return id_of(token);
}

Vocabulary load_vocab(const std::filesystem::path& path) {
  return Vocabulary::from_lines(read_lines(path), path.string());
}

}  // namespace lexattr
