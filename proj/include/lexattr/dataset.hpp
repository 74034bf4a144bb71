#ifndef LEXATTR_DATASET_HPP_
#define LEXATTR_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lexattr/model.hpp"

namespace lexattr {

// Binary task file. Canonical form is TSV with header "label<TAB>text";
// files ending in .jsonl/.json are read as JSON lines
// {"label": 0|1, "text": "..."}. Throws BadLabelError / EmptySentenceError /
// FormatError, always with a line number; no row is ever dropped silently.
std::vector<Example> ingest_overrule(const std::filesystem::path& path);

// Multiple-choice task file. Canonical TSV header:
// "example_id<TAB>context<TAB>holding_0..holding_4<TAB>answer"; JSON-lines
// mirror {"example_id", "context", "holdings": [5 strings], "answer"}.
// Throws OptionCountError / AnswerRangeError / FormatError.
std::vector<Example> ingest_casehold(const std::filesystem::path& path);

std::string overrule_to_tsv(const std::vector<Example>& examples);
std::string casehold_to_tsv(const std::vector<Example>& examples);

struct SyntheticSpec {
  std::size_t train_size = 600;
  std::size_t test_size = 200;
  std::uint64_t seed = 7;
};

struct SyntheticData {
  std::vector<std::string> vocab_lines;
  std::vector<Example> train;
  std::vector<Example> test;
};

// Deterministic linearly separable binary corpus: positive examples carry
// words from one keyword set, negatives from a disjoint one, over shared
// filler text. The emitted vocab covers every word plus the specials.
SyntheticData make_synthetic_binary(const SyntheticSpec& spec);

}  // namespace lexattr

#endif  // LEXATTR_DATASET_HPP_
