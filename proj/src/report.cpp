#include "lexattr/report.hpp"

#include <algorithm>
#include <cmath>

#include "lexattr/io.hpp"

namespace lexattr {

std::string escape_html(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

ReportDocument build_report(const std::vector<AttributionRecord>& records,
                            std::size_t max_blocks, double neutral_epsilon) {
  ReportDocument doc;
  doc.neutral_epsilon = neutral_epsilon;
  for (const AttributionRecord& record : records) {
    if (doc.blocks.size() >= max_blocks) break;
    ReportBlock block;
    block.example_id = record.example_id;
    block.error = record.error;
    if (!record.ok()) {
      doc.blocks.push_back(std::move(block));
      continue;
    }
    block.prediction_probability = record.prediction_probability;
    block.attribution_sum = record.attribution_sum;
    block.correct = record.correct;

    double max_abs = 0.0;
    for (double s : record.token_scores) max_abs = std::max(max_abs, std::abs(s));
    const double threshold = neutral_epsilon * max_abs;

    block.spans.reserve(record.tokens.size());
    for (std::size_t i = 0; i < record.tokens.size(); ++i) {
      TokenSpan span;
      span.text = record.tokens[i];
      span.score = record.token_scores[i];
      span.special = record.is_special[i] != 0;
      if (max_abs > 0.0 && std::abs(span.score) >= threshold &&
          std::abs(span.score) > 0.0) {
        span.intensity = std::abs(span.score) / max_abs;
        span.color = span.score > 0.0 ? SpanColor::kPositive : SpanColor::kNegative;
      }
      block.spans.push_back(std::move(span));
    }
    doc.blocks.push_back(std::move(block));
  }
  return doc;
}

namespace {

const char* kStyle = R"(body{font-family:Georgia,serif;margin:2em;background:#fafafa;color:#222}
.block{background:#fff;border:1px solid #ddd;border-radius:4px;padding:1em;margin-bottom:1.2em}
.hdr{font-family:monospace;font-size:0.9em;color:#444;margin-bottom:0.6em}
.hdr .ok{color:#1a7a1a;font-weight:bold}
.hdr .bad{color:#b02020;font-weight:bold}
.tokens{line-height:1.9}
.tok{padding:0 2px;border-radius:2px}
.tok.special{color:#999;font-style:italic}
.legend{margin-bottom:1.5em;font-size:0.9em;color:#555}
.err{color:#b02020;font-family:monospace})";

std::string rgba(SpanColor color, double intensity) {
  // Alpha floor keeps faint spans visible.
  double alpha = 0.15 + 0.85 * intensity;
  const char* base = color == SpanColor::kPositive ? "34,139,34" : "205,52,52";
  return std::string("rgba(") + base + "," + format_double(alpha) + ")";
}

}  // namespace

std::string render_html(const ReportDocument& doc) {
  std::string html;
  html += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>Token attribution report</title>\n<style>\n";
  html += kStyle;
  html += "\n</style>\n</head>\n<body>\n";
  html += "<h1>Token attribution report</h1>\n";
  html += "<div class=\"legend\">Green spans carry positive attribution, red "
          "spans negative; intensity scales with |score| relative to the "
          "example's largest |score|. Special tokens are italic.</div>\n";

  for (const ReportBlock& block : doc.blocks) {
    html += "<div class=\"block\" data-example=\"" + escape_html(block.example_id) +
            "\">\n";
    if (!block.error.empty()) {
      html += "<div class=\"hdr\">example " + escape_html(block.example_id) +
              "</div>\n<div class=\"err\">attribution failed: " +
              escape_html(block.error) + "</div>\n</div>\n";
      continue;
    }
    html += "<div class=\"hdr\">example " + escape_html(block.example_id) +
            " &middot; prediction probability " +
            format_double(block.prediction_probability) +
            " &middot; attribution sum " + format_double(block.attribution_sum) +
            " &middot; <span class=\"" + (block.correct ? "ok\">correct" : "bad\">incorrect") +
            "</span></div>\n";
    html += "<div class=\"tokens\">";
    for (const TokenSpan& span : block.spans) {
      std::string cls = "tok";
      std::string style;
      switch (span.color) {
        case SpanColor::kPositive:
          cls += " pos";
          style = " style=\"background:" + rgba(span.color, span.intensity) + "\"";
          break;
        case SpanColor::kNegative:
          cls += " neg";
          style = " style=\"background:" + rgba(span.color, span.intensity) + "\"";
          break;
        case SpanColor::kNeutral:
          cls += " neu";
          break;
      }
      if (span.special) cls += " special";
      html += "<span class=\"" + cls + "\"" + style + " title=\"" +
              format_double(span.score) + "\">" + escape_html(span.text) +
              "</span> ";
    }
    html += "</div>\n</div>\n";
  }
  html += "</body>\n</html>\n";
  return html;
}

}  // namespace lexattr
