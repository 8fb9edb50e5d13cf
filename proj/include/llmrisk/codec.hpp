#pragma once

// Canonical serialization shared by files on disk and HTTP bodies: JSON with
// sorted keys, two-space indentation and a trailing newline. Scores and other
// exact rationals travel as strings ("6.75", "1/3") so they reparse exactly.

#include "llmrisk/assessment.hpp"
#include "llmrisk/catalog.hpp"
#include "llmrisk/error.hpp"
#include "llmrisk/matrix.hpp"
#include "llmrisk/rating.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace llmrisk::codec {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

namespace kind {
inline constexpr std::string_view kAssessment = "assessment";
inline constexpr std::string_view kCatalog = "catalog";
inline constexpr std::string_view kScheme = "rating_scheme";
inline constexpr std::string_view kAdjustment = "control_adjustment";
inline constexpr std::string_view kMatrix = "threat_matrix";
}  // namespace kind

// Io when the file cannot be read, Parse when it is not valid JSON.
std::string read_text_file(const std::filesystem::path& path);
Json read_json_file(const std::filesystem::path& path);
Json parse(std::string_view text, std::string_view origin = "<input>");

// Canonical text form of a document.
std::string dump(const Json& j);

// The "kind" field, or empty when absent.
std::string kind_of(const Json& j);

Json to_json(const rating::RatingScheme& scheme);
rating::RatingScheme scheme_from_json(const Json& j);

Json to_json(const rating::FactorAssignment& a);
// Accepts an array of assignment objects or a {factor_id: score} map.
std::vector<rating::FactorAssignment> assignments_from_json(const Json& j);

Json to_json(const rating::RiskRating& r);
rating::RiskRating rating_from_json(const Json& j);

Json to_json(const catalog::ThreatEntry& e);
catalog::ThreatEntry threat_from_json(const Json& j);
Json to_json(const catalog::Catalog& c);
// Structural parse only; catalog::check_catalog enforces the invariants.
catalog::Catalog catalog_from_json(const Json& j);

Json to_json(const assessment::ControlAdjustment& a);
assessment::ControlAdjustment adjustment_from_json(const Json& j);

Json to_json(const assessment::AssessmentDocument& d);
assessment::AssessmentDocument assessment_from_json(const Json& j);

Json to_json(const matrix::ThreatMatrix& m);
matrix::ThreatMatrix matrix_from_json(const Json& j);

Json to_json(const rating::ValidationReport& r);

// ApiError body: {"code", "message", "locus"} plus "missing" for
// incomplete_factors.
Json to_json(const Error& e);

}  // namespace llmrisk::codec
