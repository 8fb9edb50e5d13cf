#include "kit/kit.hpp"

#include "llmrisk/assessment.hpp"
#include "llmrisk/codec.hpp"
#include "llmrisk/error.hpp"

#include <doctest.h>

using namespace llmrisk;
using namespace llmrisk::assessment;
using rating::default_scheme;

namespace {

AssessmentDocument load(const std::string& name) {
    return codec::assessment_from_json(codec::read_json_file(testkit::fixture(name)));
}

const rating::ValidationIssue* find_issue(const rating::ValidationReport& r, const std::string& code) {
    for (const auto& i : r.issues) {
        if (i.code == code) return &i;
    }
    return nullptr;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("validate") {
    TEST_CASE("bundled fixtures are clean") {
        for (const char* name : {"prompt_injection.json", "training_data_poisoning.json"}) {
            const auto report = validate_document(load(name), catalog::bundled_catalog(), default_scheme());
            CHECK(report.error_count() == 0);
            CHECK(report.warning_count() == 0);
        }
    }

    TEST_CASE("evaluated document with fifteen factors") {
        auto doc = load("prompt_injection.json");
        doc.impact->business.pop_back();
        const auto report = validate_document(doc, catalog::bundled_catalog(), default_scheme());
        const auto* issue = find_issue(report, "incomplete_factors");
        REQUIRE(issue != nullptr);
        CHECK(issue->kind == rating::ValidationIssue::Kind::Error);
        CHECK(issue->message.find("privacy_violation") != std::string::npos);
    }

    TEST_CASE("incomplete drafts only warn") {
        auto doc = load("prompt_injection.json");
        doc.status = Status::Analyzed;
        doc.impact->business.pop_back();
        const auto report = validate_document(doc, catalog::bundled_catalog(), default_scheme());
        CHECK(report.ok());
        CHECK(report.has("incomplete_factors"));
    }

    TEST_CASE("unknown threat is a warning") {
        auto doc = load("prompt_injection.json");
        doc.threat = "LLM99";
        const auto report = validate_document(doc, catalog::bundled_catalog(), default_scheme());
        CHECK(report.ok());
        const auto* issue = find_issue(report, "unresolved_threat");
        REQUIRE(issue != nullptr);
        CHECK(issue->message.find("unresolved threat reference") != std::string::npos);
    }

    TEST_CASE("threat may be referenced by name") {
        auto doc = load("prompt_injection.json");
        doc.threat = "Prompt Injection";
        CHECK_FALSE(validate_document(doc, catalog::bundled_catalog(), default_scheme()).has("unresolved_threat"));
    }

    TEST_CASE("section and score errors") {
        auto doc = load("prompt_injection.json");
        std::swap(doc.scenario->assignments[0], doc.dependencies->assignments[0]);
        CHECK(validate_document(doc, catalog::bundled_catalog(), default_scheme()).has("wrong_section"));

        doc = load("prompt_injection.json");
        doc.scenario->assignments.push_back(doc.scenario->assignments[0]);
        CHECK(validate_document(doc, catalog::bundled_catalog(), default_scheme()).has("duplicate_assignment"));

        doc = load("prompt_injection.json");
        doc.impact->technical[1].score = 11;
        CHECK(validate_document(doc, catalog::bundled_catalog(), default_scheme()).has("score_out_of_range"));

        doc = load("prompt_injection.json");
        doc.impact->technical.push_back({"luck", 2, {}, "x"});
        CHECK(validate_document(doc, catalog::bundled_catalog(), default_scheme()).has("unknown_factor"));

        doc = load("prompt_injection.json");
        doc.dependencies.reset();
        CHECK(validate_document(doc, catalog::bundled_catalog(), default_scheme()).has("missing_section"));

        doc = load("prompt_injection.json");
        doc.id = ".hidden";
        CHECK(validate_document(doc, catalog::bundled_catalog(), default_scheme()).has("invalid_id"));

        doc = load("prompt_injection.json");
        doc.status = Status::Treated;
        CHECK(validate_document(doc, catalog::bundled_catalog(), default_scheme()).has("untreated"));
    }

    TEST_CASE("advisory warnings") {
        auto doc = load("prompt_injection.json");
        doc.scenario->assignments[0].rationale.clear();
        doc.scenario->assignments[1].anchor_label = "Something else";
        const auto report = validate_document(doc, catalog::bundled_catalog(), default_scheme());
        CHECK(report.ok());
        CHECK(report.has("missing_rationale"));
        CHECK(report.has("anchor_mismatch"));
    }

    TEST_CASE("document ids") {
        CHECK(is_valid_document_id("prompt_injection"));
        CHECK(is_valid_document_id("a.b-c_1"));
        CHECK_FALSE(is_valid_document_id(""));
        CHECK_FALSE(is_valid_document_id(".tmp"));
        CHECK_FALSE(is_valid_document_id("../etc"));
        CHECK_FALSE(is_valid_document_id("a/b"));
        CHECK_FALSE(is_valid_document_id(std::string(129, 'a')));
    }
}

TEST_SUITE("evaluate") {
    TEST_CASE("fixtures") {
        CHECK(evaluate_document(load("prompt_injection.json"), default_scheme()).severity == rating::Severity::High);
        CHECK(evaluate_document(load("training_data_poisoning.json"), default_scheme()).severity ==
              rating::Severity::Medium);
    }

    TEST_CASE("missing impact lists eight factors") {
        auto doc = load("prompt_injection.json");
        doc.impact.reset();
        try {
            (void)evaluate_document(doc, default_scheme());
            FAIL("expected incomplete factors");
        } catch (const IncompleteFactorsError& e) {
            CHECK(e.missing().size() == 8);
        }
    }

    TEST_CASE("validate and evaluate agree on completeness") {
        auto base = load("prompt_injection.json");
        base.status = Status::Analyzed;
        for (std::size_t drop = 0; drop < 16; ++drop) {
            auto doc = base;
            auto* section = drop < 4    ? &doc.scenario->assignments
                            : drop < 8  ? &doc.dependencies->assignments
                            : drop < 12 ? &doc.impact->technical
                                        : &doc.impact->business;
            section->erase(section->begin() + static_cast<std::ptrdiff_t>(drop % 4));
            CHECK(validate_document(doc, catalog::bundled_catalog(), default_scheme()).has("incomplete_factors"));
            CHECK_THROWS_AS((void)evaluate_document(doc, default_scheme()), IncompleteFactorsError);
        }
        CHECK_FALSE(validate_document(base, catalog::bundled_catalog(), default_scheme()).has("incomplete_factors"));
        CHECK_NOTHROW((void)evaluate_document(base, default_scheme()));
    }
}

TEST_SUITE("lifecycle") {
    TEST_CASE("analyzed to evaluated") {
        auto doc = load("prompt_injection.json");
        doc.status = Status::Analyzed;
        const auto next = advance_status(doc, Status::Evaluated, default_scheme());
        CHECK(next.status == Status::Evaluated);
        CHECK(next.revision == doc.revision + 1);
        CHECK(doc.status == Status::Analyzed);
    }

    TEST_CASE("skipping is a sequencing error") {
        auto doc = load("prompt_injection.json");
        doc.status = Status::Identified;
        CHECK(code_of([&] { (void)advance_status(doc, Status::Evaluated, default_scheme()); }) == ErrorCode::Sequencing);
        doc.status = Status::Evaluated;
        CHECK(code_of([&] { (void)advance_status(doc, Status::Analyzed, default_scheme()); }) == ErrorCode::Sequencing);
        CHECK(code_of([&] { (void)advance_status(doc, Status::Evaluated, default_scheme()); }) == ErrorCode::Sequencing);
    }

    TEST_CASE("treated needs a treatment record") {
        auto doc = load("prompt_injection.json");
        try {
            (void)advance_status(doc, Status::Treated, default_scheme());
            FAIL("expected guard error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Guard);
            CHECK(std::string(e.what()).find("treatment_recorded") != std::string::npos);
        }
        doc.treatment.acceptance_note = "risk accepted by the product owner";
        CHECK(advance_status(doc, Status::Treated, default_scheme()).status == Status::Treated);
    }

    TEST_CASE("exhaustive model check") {
        const auto r = testkit::check_lifecycle_exhaustive();
        INFO(r.first_failure);
        CHECK(r.cases == 5 * 8 * 2 * 3 * 5);
        CHECK(r.ok());
    }
}

TEST_SUITE("what-if") {
    TEST_CASE("robust prompt filtering") {
        const auto doc = load("prompt_injection.json");
        const auto adj = codec::adjustment_from_json(
            codec::read_json_file(testkit::source_dir() / "data/adjustments/robust_prompt_filtering.json"));
        const auto out = apply_adjustment(doc, adj, default_scheme());

        // Hand mean of the eight likelihood scores after the override.
        testkit::Scores s = testkit::kPromptInjection;
        s[4] = 3;
        s[5] = 3;
        CHECK(testkit::agrees(out.after, testkit::oracle(s)));
        CHECK(out.after.likelihood_score == Rational(46, 8));
        CHECK(out.after.likelihood_score.to_string() == "5.75");
        CHECK(out.after.likelihood_level == rating::Level::Medium);
        CHECK(out.after.final_impact_score == Rational(9, 2));
        CHECK(out.after.severity == rating::Severity::Medium);
        CHECK(out.before.severity == rating::Severity::High);

        CHECK(out.derived.revision == doc.revision + 1);
        REQUIRE(out.derived.derived_from.has_value());
        CHECK(out.derived.derived_from->source_id == doc.id);
        CHECK(out.derived.derived_from->adjustment_label == adj.label);
        CHECK(out.derived.treatment.adjustments.back() == adj);
        CHECK(out.derived.dependencies->assignments[1].anchor_label == "Difficult");
        CHECK(doc == load("prompt_injection.json"));
    }

    TEST_CASE("empty adjustment is the identity on ratings") {
        const auto doc = load("training_data_poisoning.json");
        const auto out = apply_adjustment(doc, ControlAdjustment{"nothing", {}, ""}, default_scheme());
        CHECK(out.before == out.after);
    }

    TEST_CASE("chained adjustments keep increasing revisions") {
        auto doc = load("prompt_injection.json");
        for (int i = 0; i < 5; ++i) {
            const auto next = apply_adjustment(doc, {"step", {{"awareness", 9 - i}}, ""}, default_scheme()).derived;
            CHECK(next.revision > doc.revision);
            doc = next;
        }
        CHECK(doc.treatment.adjustments.size() == 5);
    }

    TEST_CASE("invalid overrides") {
        const auto doc = load("prompt_injection.json");
        CHECK(code_of([&] { (void)apply_adjustment(doc, {"x", {{"luck", 3}}, ""}, default_scheme()); }) ==
              ErrorCode::Validation);
        CHECK(code_of([&] { (void)apply_adjustment(doc, {"x", {{"awareness", 12}}, ""}, default_scheme()); }) ==
              ErrorCode::Validation);
    }

    TEST_CASE("impact separation property") {
        const auto r = testkit::check_impact_separation(10000, 21);
        INFO(r.first_failure);
        CHECK(r.ok());
    }
}
