#ifndef LEXATTR_MODEL_HPP_
#define LEXATTR_MODEL_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lexattr/matrix.hpp"
#include "lexattr/tokenizer.hpp"
#include "lexattr/vocab.hpp"

namespace lexattr {

constexpr std::size_t kOptionCount = 5;

struct ModelConfig {
  int vocab_size = 0;
  int embed_dim = 32;
  int hidden_dim = 64;
  // 2 for a binary head; 1 for the shared scalar scorer applied to each
  // (context, option) pair of a multiple-choice task.
  int num_classes = 2;
  std::uint64_t seed = 42;
  double learning_rate = 0.5;
  int epochs = 30;
  int batch_size = 16;
  int pad_id = -1;  // embedding row zeroed at init when >= 0

  void validate() const;  // throws ConfigError
  bool operator==(const ModelConfig&) const = default;
};

// Mean-pooled embedding bag over non-special tokens, one tanh hidden layer,
// linear output head. All parameters are 64-bit; there is no dropout, so
// every forward pass is a pure function.
struct Classifier {
  ModelConfig config;
  Matrix embedding;         // vocab_size x embed_dim
  Matrix w1;                // hidden_dim x embed_dim
  std::vector<double> b1;   // hidden_dim
  Matrix w2;                // num_classes x hidden_dim
  std::vector<double> b2;   // num_classes

  bool operator==(const Classifier&) const;
};

enum class ExampleKind { kBinary, kMultipleChoice };

struct Example {
  ExampleKind kind = ExampleKind::kBinary;
  std::string text;     // binary
  std::string context;  // multiple choice
  std::array<std::string, kOptionCount> options{};
  int label = 0;  // 0/1, or answer index in [0, kOptionCount)
};

struct Prediction {
  std::vector<double> probabilities;
  int predicted_class = 0;  // argmax, ties broken by lowest index
  bool correct = false;
};

// Tokenized form a model consumes: one sequence for binary inputs, five
// [CLS] context [SEP] option [SEP] pair sequences for multiple choice.
struct CompiledExample {
  ExampleKind kind = ExampleKind::kBinary;
  TokenizedText sequence;
  std::vector<TokenizedText> pairs;
  int label = 0;
};

// Joins two add_specials sequences into [CLS] a [SEP] b [SEP], renumbering
// b's word indices after a's. If the result exceeds max_tokens, context
// tokens are dropped from its tail first, then option tokens.
TokenizedText make_pair_sequence(const TokenizedText& context,
                                 const TokenizedText& option,
                                 std::size_t max_tokens);

CompiledExample compile_example(const Example& example, const Vocabulary& vocab,
                                std::size_t max_tokens);
std::vector<CompiledExample> compile_dataset(const std::vector<Example>& dataset,
                                             const Vocabulary& vocab,
                                             std::size_t max_tokens);

// Parameters drawn from uniform(-0.05, 0.05), mt19937_64 stream seeded with
// config.seed; same seed gives bit-identical models.
Classifier init_model(const ModelConfig& config);

// Softmax over class logits. Throws EmptyInputError when the sequence has
// no non-special tokens, Error on out-of-range ids.
Prediction forward(const Classifier& model, const TokenizedText& tok);

// SWAG-style scoring: the shared scalar scorer (num_classes == 1) runs on
// each pair independently; softmax over the five scores. Sequences must be
// the five pair sequences of one example.
Prediction forward_multiple_choice(const Classifier& model,
                                   const std::vector<TokenizedText>& pairs);

// Convenience wrapper building pair sequences from raw tokenized texts.
Prediction forward_multiple_choice(const Classifier& model,
                                   const TokenizedText& context,
                                   const std::vector<TokenizedText>& options,
                                   std::size_t max_tokens = 512);

Prediction predict(const Classifier& model, const CompiledExample& example);

struct TrainResult {
  Classifier model;
  std::vector<double> epoch_losses;  // mean cross-entropy per epoch
};

// Minibatch gradient descent on cross-entropy. Batch order is a
// deterministic function of config.seed; identical (model, dataset, config)
// yield bit-identical parameters. Throws MixedKindsError on non-uniform
// dataset kinds, EmptyDatasetError on an empty one.
TrainResult train(Classifier model, const std::vector<CompiledExample>& dataset,
                  const ModelConfig& config);

struct EvalMetrics {
  double accuracy = 0.0;
  std::optional<double> f1;  // positive-class F1, binary tasks only
  std::size_t count = 0;
  std::vector<Prediction> predictions;
};

EvalMetrics evaluate(const Classifier& model,
                     const std::vector<CompiledExample>& dataset);

// Bit-exact round trip: doubles are stored in shortest round-trip decimal
// form inside a versioned JSON container.
void save_checkpoint(const Classifier& model, const std::filesystem::path& path);
Classifier load_checkpoint(const std::filesystem::path& path);
std::string checkpoint_to_json(const Classifier& model);
Classifier checkpoint_from_json(const std::string& text);

namespace detail {

// Forward state for one sequence, kept for backprop.
struct SequenceCache {
  Matrix x;  // T x D input embeddings
  const std::vector<std::uint8_t>* is_special = nullptr;
  std::size_t content_count = 0;
  std::vector<double> pooled;
  std::vector<double> pre_hidden;
  std::vector<double> hidden;
  std::vector<double> logits;
};

struct ParamGrads {
  Matrix embedding;
  Matrix w1;
  std::vector<double> b1;
  Matrix w2;
  std::vector<double> b2;

  explicit ParamGrads(const ModelConfig& config);
  void scale(double s);
};

Matrix embed_sequence(const Classifier& model, const TokenizedText& tok);
void run_sequence(const Classifier& model, SequenceCache& cache);
std::vector<double> softmax(const std::vector<double>& logits);

// Backprop of d(objective)/d(logits) through one cached sequence. Parameter
// gradients accumulate into `grads` (by token id for the embedding table)
// when non-null; input-embedding gradients into `dx` when non-null.
void backward_sequence(const Classifier& model, const SequenceCache& cache,
                       const std::vector<double>& dlogits,
                       const TokenizedText* tok, ParamGrads* grads, Matrix* dx);

}  // namespace detail

}  // namespace lexattr

#endif  // LEXATTR_MODEL_HPP_
