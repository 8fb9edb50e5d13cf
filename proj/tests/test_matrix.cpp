#include "kit/kit.hpp"

#include "llmrisk/codec.hpp"
#include "llmrisk/error.hpp"
#include "llmrisk/matrix.hpp"

#include <doctest.h>

#include <algorithm>

using namespace llmrisk;
using namespace llmrisk::matrix;
using rating::default_scheme;

namespace {

std::vector<assessment::AssessmentDocument> fixtures() {
    return {codec::assessment_from_json(codec::read_json_file(testkit::fixture("prompt_injection.json"))),
            codec::assessment_from_json(codec::read_json_file(testkit::fixture("training_data_poisoning.json")))};
}

std::size_t blank_rows(const ThreatMatrix& m) {
    return static_cast<std::size_t>(std::count_if(m.rows.begin(), m.rows.end(), [](const auto& r) { return r.blank(); }));
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            out.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("example matrix") {
    const auto docs = fixtures();
    const ThreatMatrix m = build_matrix(catalog::bundled_catalog(), docs, default_scheme());
    REQUIRE(m.rows.size() == 10);
    CHECK(blank_rows(m) == 8);
    const auto& pi = m.rows[0];
    REQUIRE(pi.rating);
    CHECK(pi.threat.name == "Prompt Injection");
    CHECK(pi.rating->likelihood_level == rating::Level::High);
    CHECK(pi.rating->impact_level == rating::Level::Medium);
    CHECK(pi.rating->severity == rating::Severity::High);
    CHECK(pi.assessment_ref == "prompt_injection");
    const auto& dp = m.rows[2];
    REQUIRE(dp.rating);
    CHECK(dp.threat.name == "Training Data Poisoning");
    CHECK(dp.rating->likelihood_level == rating::Level::Medium);
    CHECK(dp.rating->impact_level == rating::Level::Medium);
    CHECK(dp.rating->severity == rating::Severity::Medium);
    CHECK(m.scheme_id == "default");
    CHECK(m.catalog_version == catalog::bundled_catalog().version);
    CHECK_FALSE(m.generated_at.has_value());
}

TEST_CASE("blank template") {
    const ThreatMatrix all = build_matrix(catalog::bundled_catalog(), {}, default_scheme());
    CHECK(all.rows.size() == 10);
    CHECK(blank_rows(all) == 10);
    const auto csv = render_csv(all);
    for (const auto& row : all.rows) CHECK(csv.find(row.threat.id + ",") != std::string::npos);
    CHECK(csv.find("HIGH") == std::string::npos);

    const ThreatMatrix end_users =
        build_matrix(catalog::bundled_catalog(), {}, default_scheme(), catalog::StakeholderGroup::EndUser);
    CHECK(end_users.rows.size() ==
          catalog::filter_by_stakeholder(catalog::bundled_catalog(), catalog::StakeholderGroup::EndUser).size());
    CHECK(end_users.rows.size() == 7);
    CHECK(blank_rows(end_users) == 7);
}

TEST_CASE("documents below evaluated stay blank") {
    auto docs = fixtures();
    docs[0].status = assessment::Status::Analyzed;
    const ThreatMatrix m = build_matrix(catalog::bundled_catalog(), docs, default_scheme());
    CHECK(m.rows[0].blank());
    CHECK(blank_rows(m) == 9);
    for (const auto& row : m.rows) {
        // All three cells or none.
        CHECK(row.rating.has_value() == !row.blank());
    }
}

TEST_CASE("join errors") {
    auto docs = fixtures();
    docs[1].threat = "LLM01";
    try {
        (void)build_matrix(catalog::bundled_catalog(), docs, default_scheme());
        FAIL("expected ambiguity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Ambiguity);
    }
    docs = fixtures();
    docs[1].threat = "Prompt Injection";  // same threat by name
    CHECK_THROWS_AS((void)build_matrix(catalog::bundled_catalog(), docs, default_scheme()), Error);
    docs = fixtures();
    docs[0].threat = "LLM99";
    try {
        (void)build_matrix(catalog::bundled_catalog(), docs, default_scheme());
        FAIL("expected join error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Join);
    }
}

TEST_CASE("csv matches the golden file") {
    const std::string golden = codec::read_text_file(testkit::source_dir() / "tests/golden/example_matrix.csv");
    const auto m = build_matrix(catalog::bundled_catalog(), fixtures(), default_scheme());
    CHECK(render_csv(m) == golden);
    CHECK(render_csv(m) == render(m, Format::Csv));
    CHECK(golden.find('\r') == std::string::npos);
    CHECK(golden.find("LLM01,Prompt Injection,") == 0 + golden.find('\n') + 1);
    CHECK(golden.find("High,Medium,HIGH") != std::string::npos);
    CHECK(golden.find("Medium,Medium,MEDIUM") != std::string::npos);
}

TEST_CASE("csv quoting") {
    catalog::Catalog c;
    c.version = "t";
    catalog::ThreatEntry e;
    e.id = "LLM01";
    e.name = "Comma, \"quoted\"";
    e.causes = {"one", "two"};
    e.stakeholders = {catalog::StakeholderGroup::EndUser};
    c.entries = {e};
    const auto csv = render_csv(build_matrix(c, {}, default_scheme()));
    CHECK(csv.find("LLM01,\"Comma, \"\"quoted\"\"\",\"one\ntwo\",,,,,,,No,End Users\n") != std::string::npos);
}

TEST_CASE("markdown table") {
    const auto m = build_matrix(catalog::bundled_catalog(), fixtures(), default_scheme());
    const auto md = render_markdown(m);
    const auto rows = lines(md);
    REQUIRE(rows.size() == 12);
    CHECK(rows[1].find("|---|") == 0);
    CHECK(rows[2].find("| LLM01 | Prompt Injection |") == 0);
    CHECK(rows[2].find("| High | Medium | HIGH |") != std::string::npos);
    for (const auto& r : rows) CHECK(std::count(r.begin(), r.end(), '|') == 12);

    catalog::Catalog c;
    catalog::ThreatEntry e{"LLM01", "a|b", {"x"}, {}, {}, {}, false, {catalog::StakeholderGroup::EndUser}};
    c.entries = {e};
    CHECK(render_markdown(build_matrix(c, {}, default_scheme())).find("a\\|b") != std::string::npos);
}

TEST_CASE("json is canonical and reparses") {
    auto m = build_matrix(catalog::bundled_catalog(), fixtures(), default_scheme(), std::nullopt);
    m.generated_at = "2024-01-01T00:00:00Z";
    const auto text = render_json(m);
    const auto back = codec::matrix_from_json(codec::parse(text));
    CHECK(back == m);
    CHECK(text.find("\"likelihood_score\": \"6.75\"") != std::string::npos);
    CHECK(render_json(back) == text);
}

TEST_CASE("rendering is deterministic") {
    const auto m = build_matrix(catalog::bundled_catalog(), fixtures(), default_scheme());
    for (auto f : {Format::Csv, Format::Markdown, Format::Json}) CHECK(render(m, f) == render(m, f));
}

TEST_CASE("format names") {
    CHECK(parse_format("csv") == Format::Csv);
    CHECK(parse_format("md") == Format::Markdown);
    CHECK(parse_format("markup_table") == Format::Markdown);
    CHECK(parse_format("canonical_json") == Format::Json);
    try {
        (void)parse_format("xlsx");
        FAIL("expected usage error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Usage);
    }
}
