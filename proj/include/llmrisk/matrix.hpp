#pragma once

#include "llmrisk/assessment.hpp"
#include "llmrisk/catalog.hpp"
#include "llmrisk/rating.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace llmrisk::matrix {

struct MatrixRow {
    catalog::ThreatEntry threat;
    // Present only when an evaluated (or later) assessment exists for the
    // threat; carries both levels and the severity, so cells are never partial.
    std::optional<rating::RiskRating> rating;
    std::optional<std::string> assessment_ref;

    bool blank() const { return !rating.has_value(); }

    friend bool operator==(const MatrixRow&, const MatrixRow&) = default;
};

struct ThreatMatrix {
    std::vector<MatrixRow> rows;  // catalog order
    std::string scheme_id;
    std::string catalog_version;
    std::optional<std::string> generated_at;  // ISO-8601 UTC, omitted for reproducible output
    std::optional<catalog::StakeholderGroup> stakeholder_filter;

    friend bool operator==(const ThreatMatrix&, const ThreatMatrix&) = default;
};

// Joins the catalog (optionally filtered to one stakeholder group) with the
// given assessments. Throws Error(Join) when an assessment references a threat
// missing from the catalog and Error(Ambiguity) when two target one threat.
ThreatMatrix build_matrix(const catalog::Catalog& catalog, std::span<const assessment::AssessmentDocument> assessments,
                          const rating::RatingScheme& scheme,
                          std::optional<catalog::StakeholderGroup> stakeholder_filter = std::nullopt);

enum class Format { Csv, Markdown, Json };

// "csv", "md" / "markdown" / "markup_table", "json" / "canonical_json".
// Throws Error(Usage) for anything else.
Format parse_format(std::string_view text);

std::string render(const ThreatMatrix& matrix, Format format);
std::string render_csv(const ThreatMatrix& matrix);
std::string render_markdown(const ThreatMatrix& matrix);
std::string render_json(const ThreatMatrix& matrix);

}  // namespace llmrisk::matrix
