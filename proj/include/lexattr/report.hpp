#ifndef LEXATTR_REPORT_HPP_
#define LEXATTR_REPORT_HPP_

#include <string>
#include <vector>

#include "lexattr/attribution.hpp"

namespace lexattr {

// Token span classes: positive scores render green, negative red, and
// anything below neutral_epsilon * block max |score| neutral.
enum class SpanColor { kNeutral, kPositive, kNegative };

struct TokenSpan {
  std::string text;
  double score = 0.0;
  double intensity = 0.0;  // |score| / max |score| in the block, in [0, 1]
  SpanColor color = SpanColor::kNeutral;
  bool special = false;
};

struct ReportBlock {
  std::string example_id;
  double prediction_probability = 0.0;
  double attribution_sum = 0.0;
  bool correct = false;
  std::string error;  // failed examples render a stub block
  std::vector<TokenSpan> spans;
};

struct ReportDocument {
  std::vector<ReportBlock> blocks;
  double neutral_epsilon = 1e-4;
};

ReportDocument build_report(const std::vector<AttributionRecord>& records,
                            std::size_t max_blocks = SIZE_MAX,
                            double neutral_epsilon = 1e-4);

// Self-contained HTML page, inline CSS, no external assets.
std::string render_html(const ReportDocument& doc);

std::string escape_html(const std::string& text);

}  // namespace lexattr

#endif  // LEXATTR_REPORT_HPP_
