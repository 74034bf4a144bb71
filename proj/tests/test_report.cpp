#include <doctest.h>

#include <string>
#include <vector>

#include "lexattr/report.hpp"
#include "lexattr/rng.hpp"

using namespace lexattr;

namespace {

AttributionRecord sample_record() {
  AttributionRecord r;
  r.example_id = "0";
  r.tokens = {"[CLS]", "we", "overrule", "<smith>", "&", "co", ".", "[SEP]"};
  r.is_special = {1, 0, 0, 0, 0, 0, 0, 1};
  r.token_scores = {0.0, 0.2, 0.9, -0.4, 0.0, -0.9, 1e-9, 0.0};
  r.attribution_sum = -0.2;
  r.prediction_probability = 0.93;
  r.correct = true;
  return r;
}

std::size_t count_occurrences(const std::string& haystack,
                              const std::string& needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

TEST_CASE("empty record list renders a valid page with zero blocks") {
  std::string html = render_html(build_report({}));
  CHECK(html.find("<!DOCTYPE html>") == 0);
  CHECK(html.find("</html>") != std::string::npos);
  CHECK(count_occurrences(html, "class=\"block\"") == 0);
}

TEST_CASE("token span count equals record token count") {
  AttributionRecord r = sample_record();
  std::string html = render_html(build_report({r}));
  CHECK(count_occurrences(html, "data-example=") == 1);
  CHECK(count_occurrences(html, "<span class=\"tok") == r.tokens.size());
}

TEST_CASE("span classes agree with score signs and neutral epsilon") {
  // Parse the emitted HTML and compare class markers with the source
  // record's score signs, the round-trip check on the renderer.
  AttributionRecord r = sample_record();
  ReportDocument doc = build_report({r}, SIZE_MAX, 1e-4);
  std::string html = render_html(doc);

  const double max_abs = 0.9;
  std::size_t pos = 0, checked = 0;
  for (std::size_t i = 0; i < r.tokens.size(); ++i) {
    pos = html.find("<span class=\"tok", pos);
    REQUIRE(pos != std::string::npos);
    std::size_t end = html.find('"', pos + 13);
    std::string cls = html.substr(pos + 13, end - pos - 13);
    if (std::abs(r.token_scores[i]) < 1e-4 * max_abs) {
      CHECK(cls.find("neu") != std::string::npos);
    } else if (r.token_scores[i] > 0) {
      CHECK(cls.find("pos") != std::string::npos);
    } else {
      CHECK(cls.find("neg") != std::string::npos);
    }
    if (r.is_special[i]) {
      CHECK(cls.find("special") != std::string::npos);
    }
    ++checked;
    pos = end;
  }
  CHECK(checked == r.tokens.size());
}

TEST_CASE("html escaping keeps markup well-formed") {
  AttributionRecord r = sample_record();
  std::string html = render_html(build_report({r}));
  CHECK(html.find("&lt;smith&gt;") != std::string::npos);
  CHECK(html.find("<smith>") == std::string::npos);
  CHECK(html.find("&amp;") != std::string::npos);
}

TEST_CASE("intensity scales against the block maximum") {
  AttributionRecord r = sample_record();
  ReportDocument doc = build_report({r});
  REQUIRE(doc.blocks.size() == 1);
  const auto& spans = doc.blocks[0].spans;
  CHECK(spans[2].intensity == doctest::Approx(1.0));   // 0.9 / 0.9
  CHECK(spans[5].intensity == doctest::Approx(1.0));   // |-0.9| / 0.9
  CHECK(spans[1].intensity == doctest::Approx(0.2 / 0.9));
  CHECK(spans[0].color == SpanColor::kNeutral);
  CHECK(spans[6].color == SpanColor::kNeutral);  // below epsilon
}

TEST_CASE("failed records render an error stub block") {
  AttributionRecord failed;
  failed.example_id = "9";
  failed.error = "boom";
  std::string html = render_html(build_report({failed}));
  CHECK(html.find("attribution failed: boom") != std::string::npos);
  CHECK(count_occurrences(html, "<span class=\"tok") == 0);
}

TEST_CASE("max_blocks caps the document") {
  std::vector<AttributionRecord> records(5, sample_record());
  ReportDocument doc = build_report(records, 2);
  CHECK(doc.blocks.size() == 2);
}

TEST_CASE("all-zero scores render all-neutral spans") {
  AttributionRecord r = sample_record();
  r.token_scores.assign(r.tokens.size(), 0.0);
  ReportDocument doc = build_report({r});
  for (const TokenSpan& span : doc.blocks[0].spans) {
    CHECK(span.color == SpanColor::kNeutral);
    CHECK(span.intensity == 0.0);
  }
}
