#ifndef LEXATTR_ATTRIBUTION_HPP_
#define LEXATTR_ATTRIBUTION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lexattr/matrix.hpp"
#include "lexattr/model.hpp"

namespace lexattr {

// A scalar function of one or more embedding matrices together with its
// gradient. The integrated-gradients kernel only sees this interface, so
// the quadrature can be checked against analytically known functions.
class DifferentiableTarget {
 public:
  virtual ~DifferentiableTarget() = default;
  virtual double value(const std::vector<Matrix>& inputs) const = 0;
  // Returns value(inputs); writes dF/dinput into grads (resized to match).
  virtual double value_and_gradient(const std::vector<Matrix>& inputs,
                                    std::vector<Matrix>& grads) const = 0;
};

struct AttributionRequest {
  int target = 0;  // class index (binary) or option index (multiple choice)
  int steps = 50;
  // Baseline x'; empty means all-zero matrices of the input shapes.
  std::optional<std::vector<Matrix>> baseline;
};

// per_part[p](i,d) = (x - x')(i,d) * trapezoidal average over k = 0..steps
// of dF/de(i,d) at x' + (k/steps)(x - x'). Throws ZeroStepsError,
// ShapeMismatchError.
std::vector<Matrix> integrated_gradients(const DifferentiableTarget& target,
                                         const std::vector<Matrix>& input,
                                         const std::vector<Matrix>& baseline,
                                         int steps);

// Row sums of the per-dimension matrix; the optional mode divides the score
// vector by its Euclidean norm (display only, zero vector left unchanged).
std::vector<double> token_scores(const Matrix& per_dim, bool normalize = false);

struct AttributionRecord {
  std::string example_id;
  std::vector<std::string> tokens;       // all parts concatenated
  std::vector<std::uint8_t> is_special;
  Matrix per_dim;                        // tokens x embed_dim
  std::vector<double> token_scores;      // row sums of per_dim
  double attribution_sum = 0.0;
  double prediction_probability = 0.0;   // probability of the predicted class
  int predicted_class = 0;
  int label = 0;
  bool correct = false;
  double completeness_gap = 0.0;  // |sum - (F(x) - F(x'))|
  std::string error;              // non-empty marks a failed example

  bool ok() const { return error.empty(); }
};

// |sum of attributions - (F(x) - F(x'))| recomputed from the target.
double completeness_check(const AttributionRecord& record,
                          const DifferentiableTarget& target,
                          const std::vector<Matrix>& input,
                          const std::vector<Matrix>& baseline);

// Model-bound targets. For binary sequences F is the target-class softmax
// probability of one sequence; for multiple choice F is the target option's
// probability under the softmax over the five pair scores, a function of
// all five pair embedding matrices jointly.
class SequenceClassTarget : public DifferentiableTarget {
 public:
  SequenceClassTarget(const Classifier& model,
                      const std::vector<std::uint8_t>& is_special, int target_class);
  double value(const std::vector<Matrix>& inputs) const override;
  double value_and_gradient(const std::vector<Matrix>& inputs,
                            std::vector<Matrix>& grads) const override;

 private:
  const Classifier& model_;
  const std::vector<std::uint8_t>& is_special_;
  int target_class_;
};

class OptionChoiceTarget : public DifferentiableTarget {
 public:
  OptionChoiceTarget(const Classifier& model,
                     const std::vector<TokenizedText>& pairs, int target_option);
  double value(const std::vector<Matrix>& inputs) const override;
  double value_and_gradient(const std::vector<Matrix>& inputs,
                            std::vector<Matrix>& grads) const override;

 private:
  const Classifier& model_;
  const std::vector<TokenizedText>& pairs_;
  int target_option_;
};

struct AttributionOptions {
  int steps = 50;
  std::size_t workers = 1;
};

// Integrated gradients for one example, target = its gold label. The record
// carries the predicted-class probability and correctness flag alongside
// the label-targeted attributions.
AttributionRecord attribute_example(const Classifier& model,
                                    const CompiledExample& example,
                                    const std::string& example_id,
                                    int steps = 50);

// One record per example, input order, independent of worker count. An
// example that raises is recorded with its error message, never dropped.
std::vector<AttributionRecord> attribute_dataset(
    const Classifier& model, const std::vector<CompiledExample>& dataset,
    const AttributionOptions& options);

}  // namespace lexattr

#endif  // LEXATTR_ATTRIBUTION_HPP_
