#include "lexattr/attribution.hpp"

#include <cmath>

#include "lexattr/error.hpp"
#include "lexattr/parallel.hpp"

namespace lexattr {

namespace {

void check_shapes(const std::vector<Matrix>& input,
                  const std::vector<Matrix>& baseline) {
  if (input.size() != baseline.size()) {
    throw ShapeMismatchError("input and baseline part counts differ");
  }
  for (std::size_t p = 0; p < input.size(); ++p) {
    if (!input[p].same_shape(baseline[p])) {
      throw ShapeMismatchError("baseline shape differs from input in part " +
                               std::to_string(p));
    }
  }
}

std::vector<Matrix> zeros_like(const std::vector<Matrix>& input) {
  std::vector<Matrix> out;
  out.reserve(input.size());
  for (const Matrix& m : input) out.emplace_back(m.rows, m.cols);
  return out;
}

}  // namespace

std::vector<Matrix> integrated_gradients(const DifferentiableTarget& target,
                                         const std::vector<Matrix>& input,
                                         const std::vector<Matrix>& baseline,
                                         int steps) {
  if (steps < 1) throw ZeroStepsError("integrated gradients needs steps >= 1");
  check_shapes(input, baseline);

  std::vector<Matrix> accumulated = zeros_like(input);
  std::vector<Matrix> point = zeros_like(input);
  std::vector<Matrix> grads = zeros_like(input);

  for (int k = 0; k <= steps; ++k) {
    const double alpha = static_cast<double>(k) / static_cast<double>(steps);
    const double weight = (k == 0 || k == steps) ? 0.5 : 1.0;
    for (std::size_t p = 0; p < input.size(); ++p) {
      for (std::size_t i = 0; i < input[p].data.size(); ++i) {
        point[p].data[i] = baseline[p].data[i] +
                           alpha * (input[p].data[i] - baseline[p].data[i]);
      }
    }
    target.value_and_gradient(point, grads);
    for (std::size_t p = 0; p < input.size(); ++p) {
      for (std::size_t i = 0; i < input[p].data.size(); ++i) {
        accumulated[p].data[i] += weight * grads[p].data[i];
      }
    }
  }

  const double inv_steps = 1.0 / static_cast<double>(steps);
  for (std::size_t p = 0; p < input.size(); ++p) {
    for (std::size_t i = 0; i < input[p].data.size(); ++i) {
      accumulated[p].data[i] *= (input[p].data[i] - baseline[p].data[i]) * inv_steps;
    }
  }
  return accumulated;
}

std::vector<double> token_scores(const Matrix& per_dim, bool normalize) {
  std::vector<double> scores(per_dim.rows, 0.0);
  for (std::size_t i = 0; i < per_dim.rows; ++i) {
    double sum = 0.0;
    for (std::size_t d = 0; d < per_dim.cols; ++d) sum += per_dim(i, d);
    scores[i] = sum;
  }
  if (normalize) {
    double norm_sq = 0.0;
    for (double s : scores) norm_sq += s * s;
    if (norm_sq > 0.0) {
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (double& s : scores) s *= inv;
    }
  }
  return scores;
}

double completeness_check(const AttributionRecord& record,
                          const DifferentiableTarget& target,
                          const std::vector<Matrix>& input,
                          const std::vector<Matrix>& baseline) {
  check_shapes(input, baseline);
  return std::abs(record.attribution_sum -
                  (target.value(input) - target.value(baseline)));
}

SequenceClassTarget::SequenceClassTarget(
    const Classifier& model, const std::vector<std::uint8_t>& is_special,
    int target_class)
    : model_(model), is_special_(is_special), target_class_(target_class) {
  if (target_class < 0 || target_class >= model.config.num_classes) {
    throw Error("target class out of range");
  }
}

double SequenceClassTarget::value(const std::vector<Matrix>& inputs) const {
  detail::SequenceCache cache;
  cache.x = inputs.at(0);
  cache.is_special = &is_special_;
  detail::run_sequence(model_, cache);
  return detail::softmax(cache.logits)[target_class_];
}

double SequenceClassTarget::value_and_gradient(
    const std::vector<Matrix>& inputs, std::vector<Matrix>& grads) const {
  detail::SequenceCache cache;
  cache.x = inputs.at(0);
  cache.is_special = &is_special_;
  detail::run_sequence(model_, cache);
  std::vector<double> probs = detail::softmax(cache.logits);

  // d prob_t / d z_c = prob_t * (delta_tc - prob_c)
  std::vector<double> dlogits(probs.size());
  const double pt = probs[target_class_];
  for (std::size_t c = 0; c < probs.size(); ++c) {
    dlogits[c] = pt * ((static_cast<int>(c) == target_class_ ? 1.0 : 0.0) - probs[c]);
  }

  grads.assign(1, Matrix(cache.x.rows, cache.x.cols));
  detail::backward_sequence(model_, cache, dlogits, nullptr, nullptr, &grads[0]);
  return pt;
}

OptionChoiceTarget::OptionChoiceTarget(const Classifier& model,
                                       const std::vector<TokenizedText>& pairs,
                                       int target_option)
    : model_(model), pairs_(pairs), target_option_(target_option) {
  if (pairs.size() != kOptionCount) {
    throw OptionCountError("multiple-choice target needs " +
                           std::to_string(kOptionCount) + " pair sequences");
  }
  if (model.config.num_classes != 1) {
    throw ConfigError("multiple-choice scoring needs num_classes == 1");
  }
  if (target_option < 0 || target_option >= static_cast<int>(kOptionCount)) {
    throw Error("target option out of range");
  }
}

double OptionChoiceTarget::value(const std::vector<Matrix>& inputs) const {
  std::vector<double> scores(kOptionCount);
  for (std::size_t j = 0; j < kOptionCount; ++j) {
    detail::SequenceCache cache;
    cache.x = inputs.at(j);
    cache.is_special = &pairs_[j].is_special;
    detail::run_sequence(model_, cache);
    scores[j] = cache.logits[0];
  }
  return detail::softmax(scores)[target_option_];
}

double OptionChoiceTarget::value_and_gradient(
    const std::vector<Matrix>& inputs, std::vector<Matrix>& grads) const {
  std::vector<detail::SequenceCache> caches(kOptionCount);
  std::vector<double> scores(kOptionCount);
  for (std::size_t j = 0; j < kOptionCount; ++j) {
    caches[j].x = inputs.at(j);
    caches[j].is_special = &pairs_[j].is_special;
    detail::run_sequence(model_, caches[j]);
    scores[j] = caches[j].logits[0];
  }
  std::vector<double> probs = detail::softmax(scores);
  const double pt = probs[target_option_];

  grads.clear();
  grads.reserve(kOptionCount);
  for (std::size_t j = 0; j < kOptionCount; ++j) {
    grads.emplace_back(inputs[j].rows, inputs[j].cols);
    const double ds =
        pt * ((static_cast<int>(j) == target_option_ ? 1.0 : 0.0) - probs[j]);
    detail::backward_sequence(model_, caches[j], {ds}, nullptr, nullptr,
                              &grads[j]);
  }
  return pt;
}

namespace {

// Shared tail of attribute_example once target, inputs and token metadata
// are assembled.
AttributionRecord finish_record(const DifferentiableTarget& target,
                                const std::vector<Matrix>& input,
                                AttributionRecord record, int steps) {
  std::vector<Matrix> baseline = zeros_like(input);
  std::vector<Matrix> per_part = integrated_gradients(target, input, baseline, steps);

  std::size_t total_rows = 0;
  for (const Matrix& m : per_part) total_rows += m.rows;
  const std::size_t dim = per_part.empty() ? 0 : per_part[0].cols;
  record.per_dim = Matrix(total_rows, dim);
  std::size_t row = 0;
  for (const Matrix& m : per_part) {
    for (std::size_t i = 0; i < m.rows; ++i, ++row) {
      for (std::size_t d = 0; d < dim; ++d) record.per_dim(row, d) = m(i, d);
    }
  }

  record.token_scores = token_scores(record.per_dim);
  double sum = 0.0;
  for (double s : record.token_scores) sum += s;
  record.attribution_sum = sum;
  record.completeness_gap = completeness_check(record, target, input, baseline);
  return record;
}

}  // namespace

AttributionRecord attribute_example(const Classifier& model,
                                    const CompiledExample& example,
                                    const std::string& example_id, int steps) {
  AttributionRecord record;
  record.example_id = example_id;
  record.label = example.label;

  Prediction pred = predict(model, example);
  record.predicted_class = pred.predicted_class;
  record.prediction_probability = pred.probabilities[pred.predicted_class];
  record.correct = pred.correct;

  if (example.kind == ExampleKind::kBinary) {
    record.tokens = example.sequence.token_strings;
    record.is_special = example.sequence.is_special;
    SequenceClassTarget target(model, example.sequence.is_special, example.label);
    std::vector<Matrix> input{detail::embed_sequence(model, example.sequence)};
    return finish_record(target, input, std::move(record), steps);
  }

  for (const TokenizedText& pair : example.pairs) {
    record.tokens.insert(record.tokens.end(), pair.token_strings.begin(),
                         pair.token_strings.end());
    record.is_special.insert(record.is_special.end(), pair.is_special.begin(),
                             pair.is_special.end());
  }
  OptionChoiceTarget target(model, example.pairs, example.label);
  std::vector<Matrix> input;
  input.reserve(kOptionCount);
  for (const TokenizedText& pair : example.pairs) {
    input.push_back(detail::embed_sequence(model, pair));
  }
  return finish_record(target, input, std::move(record), steps);
}

std::vector<AttributionRecord> attribute_dataset(
    const Classifier& model, const std::vector<CompiledExample>& dataset,
    const AttributionOptions& options) {
  std::vector<AttributionRecord> records(dataset.size());
  parallel_for(dataset.size(), options.workers, [&](std::size_t i) {
    const std::string id = std::to_string(i);
    try {
      records[i] = attribute_example(model, dataset[i], id, options.steps);
    } catch (const std::exception& e) {
      AttributionRecord failed;
      failed.example_id = id;
      failed.label = dataset[i].label;
      failed.error = e.what();
      records[i] = std::move(failed);
    }
  });
  return records;
}

}  // namespace lexattr
