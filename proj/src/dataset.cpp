#include "lexattr/dataset.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "lexattr/error.hpp"
#include "lexattr/io.hpp"
#include "lexattr/rng.hpp"

namespace lexattr {

using nlohmann::json;

namespace {

constexpr const char* kOverruleHeader = "label\ttext";
constexpr const char* kCaseholdHeader =
    "example_id\tcontext\tholding_0\tholding_1\tholding_2\tholding_3\t"
    "holding_4\tanswer";

bool is_jsonl(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  return ext == ".jsonl" || ext == ".json";
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

int parse_binary_label(const std::string& raw,
                       const std::filesystem::path& path, std::size_t line) {
  if (raw == "0") return 0;
  if (raw == "1") return 1;
  throw BadLabelError("bad label '" + raw + "' at " + where(path, line) +
                      " (expected 0 or 1)");
}

int parse_answer(const std::string& raw, const std::filesystem::path& path,
                 std::size_t line) {
  if (raw.size() == 1 && raw[0] >= '0' && raw[0] < '0' + static_cast<char>(kOptionCount)) {
    return raw[0] - '0';
  }
  throw AnswerRangeError("answer '" + raw + "' at " + where(path, line) +
                         " out of range [0, " + std::to_string(kOptionCount) + ")");
}

}  // namespace

std::vector<Example> ingest_overrule(const std::filesystem::path& path) {
  std::vector<Example> examples;
  std::vector<std::string> lines = read_lines(path);

  if (is_jsonl(path)) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      json row;
      try {
        row = json::parse(lines[i]);
      } catch (const json::exception& e) {
        throw FormatError("bad JSON at " + where(path, i + 1) + ": " + e.what());
      }
      Example example;
      example.kind = ExampleKind::kBinary;
      if (!row.contains("label") || !row.contains("text")) {
        throw FormatError("missing label/text at " + where(path, i + 1));
      }
      if (!row["label"].is_number_integer() ||
          (row["label"] != 0 && row["label"] != 1)) {
        throw BadLabelError("bad label at " + where(path, i + 1) +
                            " (expected 0 or 1)");
      }
      example.label = row["label"].get<int>();
      example.text = row["text"].get<std::string>();
      if (example.text.empty()) {
        throw EmptySentenceError("empty text at " + where(path, i + 1));
      }
      examples.push_back(std::move(example));
    }
    return examples;
  }

  if (lines.empty() || lines[0] != kOverruleHeader) {
    throw FormatError("expected header '" + std::string(kOverruleHeader) +
                      "' in " + path.string());
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split_tsv(lines[i]);
    if (fields.size() != 2) {
      throw FormatError("expected 2 fields at " + where(path, i + 1) + ", got " +
                        std::to_string(fields.size()));
    }
    Example example;
    example.kind = ExampleKind::kBinary;
    example.label = parse_binary_label(fields[0], path, i + 1);
    example.text = fields[1];
    if (example.text.empty()) {
      throw EmptySentenceError("empty sentence at " + where(path, i + 1));
    }
    examples.push_back(std::move(example));
  }
  return examples;
}

std::vector<Example> ingest_casehold(const std::filesystem::path& path) {
  std::vector<Example> examples;
  std::vector<std::string> lines = read_lines(path);

  if (is_jsonl(path)) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      json row;
      try {
        row = json::parse(lines[i]);
      } catch (const json::exception& e) {
        throw FormatError("bad JSON at " + where(path, i + 1) + ": " + e.what());
      }
      Example example;
      example.kind = ExampleKind::kMultipleChoice;
      example.context = row.value("context", "");
      if (!row.contains("holdings") || !row["holdings"].is_array() ||
          row["holdings"].size() != kOptionCount) {
        throw OptionCountError("expected " + std::to_string(kOptionCount) +
                               " holdings at " + where(path, i + 1));
      }
      for (std::size_t k = 0; k < kOptionCount; ++k) {
        example.options[k] = row["holdings"][k].get<std::string>();
      }
      if (!row.contains("answer") || !row["answer"].is_number_integer() ||
          row["answer"] < 0 ||
          row["answer"] >= static_cast<int>(kOptionCount)) {
        throw AnswerRangeError("answer out of range at " + where(path, i + 1));
      }
      example.label = row["answer"].get<int>();
      examples.push_back(std::move(example));
    }
    return examples;
  }

  if (lines.empty() || lines[0] != kCaseholdHeader) {
    throw FormatError(
        "unexpected casehold header in " + path.string() +
        "; the ingester requires exactly: " + kCaseholdHeader);
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split_tsv(lines[i]);
    if (fields.size() != 8) {
      throw OptionCountError("expected 8 fields (5 holdings) at " +
                             where(path, i + 1) + ", got " +
                             std::to_string(fields.size()));
    }
    Example example;
    example.kind = ExampleKind::kMultipleChoice;
    example.context = fields[1];
    for (std::size_t k = 0; k < kOptionCount; ++k) {
      example.options[k] = fields[2 + k];
    }
    example.label = parse_answer(fields[7], path, i + 1);
    examples.push_back(std::move(example));
  }
  return examples;
}

std::string overrule_to_tsv(const std::vector<Example>& examples) {
  std::string out = std::string(kOverruleHeader) + "\n";
  for (const Example& example : examples) {
    check_tsv_field(example.text, "overrule text");
    out += std::to_string(example.label);
    out += '\t';
    out += example.text;
    out += '\n';
  }
  return out;
}

std::string casehold_to_tsv(const std::vector<Example>& examples) {
  std::string out = std::string(kCaseholdHeader) + "\n";
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const Example& example = examples[i];
    check_tsv_field(example.context, "casehold context");
    out += std::to_string(i);
    out += '\t';
    out += example.context;
    for (const std::string& option : example.options) {
      check_tsv_field(option, "casehold holding");
      out += '\t';
      out += option;
    }
    out += '\t';
    out += std::to_string(example.label);
    out += '\n';
  }
  return out;
}

namespace {

// Shared filler plus two disjoint signal sets; the signal words are the
// only correlation with the label.
const std::vector<std::string> kFillerWords = {
    "the",      "court",   "of",      "in",       "a",        "to",
    "that",     "case",    "law",     "we",       "this",     "by",
    "judgment", "opinion", "state",   "appeal",   "motion",   "record",
    "trial",    "counsel", "statute", "evidence", "question", "under",
    "rule",     "matter",  "order",   "party",    "district", "review"};

const std::vector<std::string> kPositiveSignals = {
    "overrule", "overruled", "abrogate", "disapprove",
    "recede",   "repudiate", "rescind",  "supersede"};

const std::vector<std::string> kNegativeSignals = {
    "affirm", "remand", "conclude", "describe",
    "note",   "quote",  "discuss",  "summarize"};

std::string make_sentence(Rng& rng, bool positive) {
  const auto& signals = positive ? kPositiveSignals : kNegativeSignals;
  const std::size_t filler_count = 8 + rng.index(9);   // 8..16
  const std::size_t signal_count = 1 + rng.index(3);   // 1..3
  std::vector<std::string> words;
  words.reserve(filler_count + signal_count);
  for (std::size_t i = 0; i < filler_count; ++i) {
    words.push_back(kFillerWords[rng.index(kFillerWords.size())]);
  }
  for (std::size_t i = 0; i < signal_count; ++i) {
    std::size_t at = rng.index(words.size() + 1);
    words.insert(words.begin() + at, signals[rng.index(signals.size())]);
  }
  std::string sentence;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) sentence += ' ';
    sentence += words[i];
  }
  sentence += " .";
  return sentence;
}

std::vector<Example> make_split(Rng& rng, std::size_t size) {
  std::vector<Example> split;
  split.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    Example example;
    example.kind = ExampleKind::kBinary;
    example.label = static_cast<int>(i % 2);  // balanced
    example.text = make_sentence(rng, example.label == 1);
    split.push_back(std::move(example));
  }
  return split;
}

}  // namespace

SyntheticData make_synthetic_binary(const SyntheticSpec& spec) {
  SyntheticData data;
  data.vocab_lines = {Vocabulary::kPad, Vocabulary::kUnk, Vocabulary::kCls,
                      Vocabulary::kSep, "."};
  for (const auto& w : kFillerWords) data.vocab_lines.push_back(w);
  for (const auto& w : kPositiveSignals) data.vocab_lines.push_back(w);
  for (const auto& w : kNegativeSignals) data.vocab_lines.push_back(w);

  Rng rng(spec.seed, /*stream=*/2);
  data.train = make_split(rng, spec.train_size);
  data.test = make_split(rng, spec.test_size);
  return data;
}

}  // namespace lexattr
