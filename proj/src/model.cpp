#include "lexattr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "lexattr/error.hpp"
#include "lexattr/io.hpp"
#include "lexattr/rng.hpp"

namespace lexattr {

using nlohmann::json;

void ModelConfig::validate() const {
  if (vocab_size <= 0) throw ConfigError("vocab_size must be positive");
  if (embed_dim <= 0) throw ConfigError("embed_dim must be positive");
  if (hidden_dim <= 0) throw ConfigError("hidden_dim must be positive");
  if (num_classes <= 0) throw ConfigError("num_classes must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (pad_id >= vocab_size) throw ConfigError("pad_id out of range");
}

bool Classifier::operator==(const Classifier& other) const {
  return config == other.config && embedding == other.embedding &&
         w1 == other.w1 && b1 == other.b1 && w2 == other.w2 && b2 == other.b2;
}

Classifier init_model(const ModelConfig& config) {
  config.validate();
  Classifier model;
  model.config = config;
  model.embedding = Matrix(config.vocab_size, config.embed_dim);
  model.w1 = Matrix(config.hidden_dim, config.embed_dim);
  model.b1.assign(config.hidden_dim, 0.0);
  model.w2 = Matrix(config.num_classes, config.hidden_dim);
  model.b2.assign(config.num_classes, 0.0);

  Rng rng(config.seed, /*stream=*/0);
  auto fill = [&](std::vector<double>& v) {
    for (double& x : v) x = rng.uniform(-0.05, 0.05);
  };
  fill(model.embedding.data);
  fill(model.w1.data);
  fill(model.b1);
  fill(model.w2.data);
  fill(model.b2);

  if (config.pad_id >= 0) {
    for (int d = 0; d < config.embed_dim; ++d) {
      model.embedding(config.pad_id, d) = 0.0;
    }
  }
  return model;
}

namespace detail {

ParamGrads::ParamGrads(const ModelConfig& config)
    : embedding(config.vocab_size, config.embed_dim),
      w1(config.hidden_dim, config.embed_dim),
      b1(config.hidden_dim, 0.0),
      w2(config.num_classes, config.hidden_dim),
      b2(config.num_classes, 0.0) {}

void ParamGrads::scale(double s) {
  for (double& x : embedding.data) x *= s;
  for (double& x : w1.data) x *= s;
  for (double& x : b1) x *= s;
  for (double& x : w2.data) x *= s;
  for (double& x : b2) x *= s;
}

Matrix embed_sequence(const Classifier& model, const TokenizedText& tok) {
  const auto dim = static_cast<std::size_t>(model.config.embed_dim);
  Matrix x(tok.size(), dim);
  for (std::size_t i = 0; i < tok.size(); ++i) {
    TokenId id = tok.token_ids[i];
    if (id < 0 || id >= model.config.vocab_size) {
      throw Error("token id " + std::to_string(id) + " out of range for vocab_size " +
                  std::to_string(model.config.vocab_size));
    }
    for (std::size_t d = 0; d < dim; ++d) x(i, d) = model.embedding(id, d);
  }
  return x;
}

void run_sequence(const Classifier& model, SequenceCache& cache) {
  const auto dim = static_cast<std::size_t>(model.config.embed_dim);
  const auto hidden_dim = static_cast<std::size_t>(model.config.hidden_dim);
  const auto classes = static_cast<std::size_t>(model.config.num_classes);
  const auto& specials = *cache.is_special;

  std::size_t n = 0;
  cache.pooled.assign(dim, 0.0);
  for (std::size_t i = 0; i < cache.x.rows; ++i) {
    if (specials[i]) continue;
    ++n;
    for (std::size_t d = 0; d < dim; ++d) cache.pooled[d] += cache.x(i, d);
  }
  if (n == 0) throw EmptyInputError("sequence has no non-special tokens");
  cache.content_count = n;
  for (double& v : cache.pooled) v /= static_cast<double>(n);

  cache.pre_hidden.assign(hidden_dim, 0.0);
  cache.hidden.assign(hidden_dim, 0.0);
  for (std::size_t j = 0; j < hidden_dim; ++j) {
    double acc = model.b1[j];
    for (std::size_t d = 0; d < dim; ++d) acc += model.w1(j, d) * cache.pooled[d];
    cache.pre_hidden[j] = acc;
    cache.hidden[j] = std::tanh(acc);
  }

  cache.logits.assign(classes, 0.0);
  for (std::size_t c = 0; c < classes; ++c) {
    double acc = model.b2[c];
    for (std::size_t j = 0; j < hidden_dim; ++j) acc += model.w2(c, j) * cache.hidden[j];
    cache.logits[c] = acc;
  }
}

std::vector<double> softmax(const std::vector<double>& logits) {
  double max_logit = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

void backward_sequence(const Classifier& model, const SequenceCache& cache,
                       const std::vector<double>& dlogits,
                       const TokenizedText* tok, ParamGrads* grads, Matrix* dx) {
  const auto dim = static_cast<std::size_t>(model.config.embed_dim);
  const auto hidden_dim = static_cast<std::size_t>(model.config.hidden_dim);
  const auto classes = static_cast<std::size_t>(model.config.num_classes);
  const auto& specials = *cache.is_special;

  std::vector<double> dhidden(hidden_dim, 0.0);
  for (std::size_t c = 0; c < classes; ++c) {
    const double dz = dlogits[c];
    if (grads) {
      grads->b2[c] += dz;
      for (std::size_t j = 0; j < hidden_dim; ++j) {
        grads->w2(c, j) += dz * cache.hidden[j];
      }
    }
    for (std::size_t j = 0; j < hidden_dim; ++j) {
      dhidden[j] += dz * model.w2(c, j);
    }
  }

  std::vector<double> dpre(hidden_dim);
  for (std::size_t j = 0; j < hidden_dim; ++j) {
    dpre[j] = dhidden[j] * (1.0 - cache.hidden[j] * cache.hidden[j]);
  }

  std::vector<double> dpooled(dim, 0.0);
  for (std::size_t j = 0; j < hidden_dim; ++j) {
    if (grads) {
      grads->b1[j] += dpre[j];
      for (std::size_t d = 0; d < dim; ++d) {
        grads->w1(j, d) += dpre[j] * cache.pooled[d];
      }
    }
    for (std::size_t d = 0; d < dim; ++d) {
      dpooled[d] += dpre[j] * model.w1(j, d);
    }
  }

  const double inv_n = 1.0 / static_cast<double>(cache.content_count);
  for (std::size_t i = 0; i < cache.x.rows; ++i) {
    if (specials[i]) continue;
    for (std::size_t d = 0; d < dim; ++d) {
      const double g = dpooled[d] * inv_n;
      if (dx) (*dx)(i, d) += g;
      if (grads && tok) grads->embedding(tok->token_ids[i], d) += g;
    }
  }
}

}  // namespace detail

namespace {

int argmax_lowest(const std::vector<double>& values) {
  int best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = static_cast<int>(i);
  }
  return best;
}

double sequence_score(const Classifier& model, const TokenizedText& tok,
                      detail::SequenceCache& cache) {
  cache.x = detail::embed_sequence(model, tok);
  cache.is_special = &tok.is_special;
  detail::run_sequence(model, cache);
  return cache.logits[0];
}

}  // namespace

Prediction forward(const Classifier& model, const TokenizedText& tok) {
  detail::SequenceCache cache;
  cache.x = detail::embed_sequence(model, tok);
  cache.is_special = &tok.is_special;
  detail::run_sequence(model, cache);

  Prediction pred;
  pred.probabilities = detail::softmax(cache.logits);
  pred.predicted_class = argmax_lowest(pred.probabilities);
  return pred;
}

Prediction forward_multiple_choice(const Classifier& model,
                                   const std::vector<TokenizedText>& pairs) {
  if (pairs.size() != kOptionCount) {
    throw OptionCountError("expected " + std::to_string(kOptionCount) +
                           " option sequences, got " + std::to_string(pairs.size()));
  }
  if (model.config.num_classes != 1) {
    throw ConfigError("multiple-choice scoring needs num_classes == 1");
  }
  std::vector<double> scores(kOptionCount);
  for (std::size_t j = 0; j < kOptionCount; ++j) {
    detail::SequenceCache cache;
    scores[j] = sequence_score(model, pairs[j], cache);
  }
  Prediction pred;
  pred.probabilities = detail::softmax(scores);
  pred.predicted_class = argmax_lowest(pred.probabilities);
  return pred;
}

Prediction forward_multiple_choice(const Classifier& model,
                                   const TokenizedText& context,
                                   const std::vector<TokenizedText>& options,
                                   std::size_t max_tokens) {
  if (options.size() != kOptionCount) {
    throw OptionCountError("expected " + std::to_string(kOptionCount) +
                           " options, got " + std::to_string(options.size()));
  }
  std::vector<TokenizedText> pairs;
  pairs.reserve(kOptionCount);
  for (const TokenizedText& option : options) {
    pairs.push_back(make_pair_sequence(context, option, max_tokens));
  }
  return forward_multiple_choice(model, pairs);
}

TokenizedText make_pair_sequence(const TokenizedText& context,
                                 const TokenizedText& option,
                                 std::size_t max_tokens) {
  if (context.empty() || option.empty() || !context.is_special.front() ||
      !context.is_special.back() || !option.is_special.front() ||
      !option.is_special.back()) {
    throw Error("pair sequences must be tokenized with add_specials");
  }
  if (max_tokens < 4) throw ConfigError("max_tokens too small for a pair");

  // Body = tokens between [CLS] and [SEP].
  const std::size_t ctx_body = context.size() - 2;
  const std::size_t opt_body = option.size() - 2;
  std::size_t keep_ctx = ctx_body;
  std::size_t keep_opt = opt_body;
  if (3 + ctx_body + opt_body > max_tokens) {
    std::size_t over = 3 + ctx_body + opt_body - max_tokens;
    std::size_t drop_ctx = std::min(ctx_body, over);
    keep_ctx = ctx_body - drop_ctx;
    std::size_t drop_opt = std::min(opt_body, over - drop_ctx);
    keep_opt = opt_body - drop_opt;
  }

  int context_words = 0;
  for (std::size_t i = 1; i + 1 < context.size(); ++i) {
    context_words = std::max(context_words, context.word_index[i] + 1);
  }

  TokenizedText out;
  out.push(context.token_ids.front(), context.token_strings.front(),
           kSpecialWordIndex, true);
  for (std::size_t i = 1; i <= keep_ctx; ++i) {
    out.push(context.token_ids[i], context.token_strings[i],
             context.word_index[i], false);
  }
  out.push(context.token_ids.back(), context.token_strings.back(),
           kSpecialWordIndex, true);
  for (std::size_t i = 1; i <= keep_opt; ++i) {
    out.push(option.token_ids[i], option.token_strings[i],
             option.word_index[i] + context_words, false);
  }
  out.push(option.token_ids.back(), option.token_strings.back(),
           kSpecialWordIndex, true);
  return out;
}

CompiledExample compile_example(const Example& example, const Vocabulary& vocab,
                                std::size_t max_tokens) {
  CompiledExample compiled;
  compiled.kind = example.kind;
  compiled.label = example.label;
  if (example.kind == ExampleKind::kBinary) {
    compiled.sequence =
        truncate_tokens(tokenize(example.text, vocab, true), max_tokens);
  } else {
    TokenizedText context = tokenize(example.context, vocab, true);
    compiled.pairs.reserve(kOptionCount);
    for (const std::string& option : example.options) {
      compiled.pairs.push_back(make_pair_sequence(
          context, tokenize(option, vocab, true), max_tokens));
    }
  }
  return compiled;
}

std::vector<CompiledExample> compile_dataset(const std::vector<Example>& dataset,
                                             const Vocabulary& vocab,
                                             std::size_t max_tokens) {
  std::vector<CompiledExample> compiled;
  compiled.reserve(dataset.size());
  for (const Example& example : dataset) {
    compiled.push_back(compile_example(example, vocab, max_tokens));
  }
  return compiled;
}

Prediction predict(const Classifier& model, const CompiledExample& example) {
  Prediction pred = example.kind == ExampleKind::kBinary
                        ? forward(model, example.sequence)
                        : forward_multiple_choice(model, example.pairs);
  pred.correct = pred.predicted_class == example.label;
  return pred;
}

namespace {

void check_uniform_kind(const std::vector<CompiledExample>& dataset,
                        const ModelConfig& config) {
  if (dataset.empty()) throw EmptyDatasetError("dataset is empty");
  ExampleKind kind = dataset.front().kind;
  for (const auto& ex : dataset) {
    if (ex.kind != kind) {
      throw MixedKindsError("dataset mixes binary and multiple-choice examples");
    }
  }
  if (kind == ExampleKind::kBinary && config.num_classes < 2) {
    throw ConfigError("binary task needs num_classes >= 2");
  }
  if (kind == ExampleKind::kMultipleChoice && config.num_classes != 1) {
    throw ConfigError("multiple-choice task needs num_classes == 1");
  }
}

// Cross-entropy loss and gradient accumulation for one example.
double example_loss_and_grads(const Classifier& model,
                              const CompiledExample& example,
                              detail::ParamGrads* grads) {
  if (example.kind == ExampleKind::kBinary) {
    detail::SequenceCache cache;
    cache.x = detail::embed_sequence(model, example.sequence);
    cache.is_special = &example.sequence.is_special;
    detail::run_sequence(model, cache);
    std::vector<double> probs = detail::softmax(cache.logits);
    double loss = -std::log(std::max(probs[example.label], 1e-300));
    if (grads) {
      std::vector<double> dlogits = probs;
      dlogits[example.label] -= 1.0;
      detail::backward_sequence(model, cache, dlogits, &example.sequence,
                                grads, nullptr);
    }
    return loss;
  }

  std::vector<detail::SequenceCache> caches(kOptionCount);
  std::vector<double> scores(kOptionCount);
  for (std::size_t j = 0; j < kOptionCount; ++j) {
    scores[j] = sequence_score(model, example.pairs[j], caches[j]);
  }
  std::vector<double> probs = detail::softmax(scores);
  double loss = -std::log(std::max(probs[example.label], 1e-300));
  if (grads) {
    for (std::size_t j = 0; j < kOptionCount; ++j) {
      double ds = probs[j] - (static_cast<int>(j) == example.label ? 1.0 : 0.0);
      detail::backward_sequence(model, caches[j], {ds}, &example.pairs[j],
                                grads, nullptr);
    }
  }
  return loss;
}

void apply_update(Classifier& model, const detail::ParamGrads& grads,
                  double learning_rate) {
  auto step = [&](std::vector<double>& param, const std::vector<double>& grad) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      param[i] -= learning_rate * grad[i];
    }
  };
  step(model.embedding.data, grads.embedding.data);
  step(model.w1.data, grads.w1.data);
  step(model.b1, grads.b1);
  step(model.w2.data, grads.w2.data);
  step(model.b2, grads.b2);
}

}  // namespace

TrainResult train(Classifier model, const std::vector<CompiledExample>& dataset,
                  const ModelConfig& config) {
  config.validate();
  check_uniform_kind(dataset, model.config);

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed, /*stream=*/1);

  TrainResult result;
  detail::ParamGrads grads(model.config);
  const auto batch_size = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
      const std::size_t end = std::min(order.size(), begin + batch_size);
      grads.embedding.fill(0.0);
      grads.w1.fill(0.0);
      grads.b1.assign(grads.b1.size(), 0.0);
      grads.w2.fill(0.0);
      grads.b2.assign(grads.b2.size(), 0.0);
      for (std::size_t k = begin; k < end; ++k) {
        epoch_loss += example_loss_and_grads(model, dataset[order[k]], &grads);
      }
      grads.scale(1.0 / static_cast<double>(end - begin));
      apply_update(model, grads, config.learning_rate);
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(order.size()));
  }
  result.model = std::move(model);
  return result;
}

EvalMetrics evaluate(const Classifier& model,
                     const std::vector<CompiledExample>& dataset) {
  if (dataset.empty()) throw EmptyDatasetError("cannot evaluate empty dataset");
  check_uniform_kind(dataset, model.config);

  EvalMetrics metrics;
  metrics.count = dataset.size();
  std::size_t correct = 0;
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const CompiledExample& example : dataset) {
    Prediction pred = predict(model, example);
    if (pred.correct) ++correct;
    if (example.kind == ExampleKind::kBinary) {
      if (pred.predicted_class == 1 && example.label == 1) ++tp;
      if (pred.predicted_class == 1 && example.label == 0) ++fp;
      if (pred.predicted_class == 0 && example.label == 1) ++fn;
    }
    metrics.predictions.push_back(std::move(pred));
  }
  metrics.accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());
  if (dataset.front().kind == ExampleKind::kBinary) {
    const double denom = static_cast<double>(2 * tp + fp + fn);
    metrics.f1 = denom == 0.0 ? 1.0 : 2.0 * static_cast<double>(tp) / denom;
  }
  return metrics;
}

namespace {

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) {
    throw FormatError("checkpoint matrix shape mismatch");
  }
  return m;
}

}  // namespace

std::string checkpoint_to_json(const Classifier& model) {
  json j{
      {"format", "lexattr-checkpoint"},
      {"version", 1},
      {"config",
       {{"vocab_size", model.config.vocab_size},
        {"embed_dim", model.config.embed_dim},
        {"hidden_dim", model.config.hidden_dim},
        {"num_classes", model.config.num_classes},
        {"seed", model.config.seed},
        {"learning_rate", model.config.learning_rate},
        {"epochs", model.config.epochs},
        {"batch_size", model.config.batch_size},
        {"pad_id", model.config.pad_id}}},
      {"parameters",
       {{"embedding", matrix_to_json(model.embedding)},
        {"w1", matrix_to_json(model.w1)},
        {"b1", model.b1},
        {"w2", matrix_to_json(model.w2)},
        {"b2", model.b2}}},
  };
  return j.dump();
}

Classifier checkpoint_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "lexattr-checkpoint" || j.value("version", 0) != 1) {
    throw FormatError("not a lexattr checkpoint (or unsupported version)");
  }
  Classifier model;
  const json& c = j.at("config");
  model.config.vocab_size = c.at("vocab_size").get<int>();
  model.config.embed_dim = c.at("embed_dim").get<int>();
  model.config.hidden_dim = c.at("hidden_dim").get<int>();
  model.config.num_classes = c.at("num_classes").get<int>();
  model.config.seed = c.at("seed").get<std::uint64_t>();
  model.config.learning_rate = c.at("learning_rate").get<double>();
  model.config.epochs = c.at("epochs").get<int>();
  model.config.batch_size = c.at("batch_size").get<int>();
  model.config.pad_id = c.at("pad_id").get<int>();
  model.config.validate();

  const json& p = j.at("parameters");
  model.embedding = matrix_from_json(p.at("embedding"));
  model.w1 = matrix_from_json(p.at("w1"));
  model.b1 = p.at("b1").get<std::vector<double>>();
  model.w2 = matrix_from_json(p.at("w2"));
  model.b2 = p.at("b2").get<std::vector<double>>();

  const auto vocab = static_cast<std::size_t>(model.config.vocab_size);
  const auto dim = static_cast<std::size_t>(model.config.embed_dim);
  const auto hidden = static_cast<std::size_t>(model.config.hidden_dim);
  const auto classes = static_cast<std::size_t>(model.config.num_classes);
  if (model.embedding.rows != vocab || model.embedding.cols != dim ||
      model.w1.rows != hidden || model.w1.cols != dim ||
      model.b1.size() != hidden || model.w2.rows != classes ||
      model.w2.cols != hidden || model.b2.size() != classes) {
    throw FormatError("checkpoint parameter shapes do not match config");
  }
  return model;
}

void save_checkpoint(const Classifier& model, const std::filesystem::path& path) {
  write_file(path, checkpoint_to_json(model));
}

Classifier load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(read_file(path));
}

}  // namespace lexattr
