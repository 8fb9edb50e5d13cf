#pragma once

#include "llmrisk/rational.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace llmrisk::rating {

enum class Category { ThreatAgent, Vulnerability, TechnicalImpact, BusinessImpact };

enum class Level { Low, Medium, High };

enum class Severity { Note, Low, Medium, High, Critical };

enum class ImpactMode { MeanOfCategoryMeans, BusinessOnly };

inline constexpr std::array kAllCategories{Category::ThreatAgent, Category::Vulnerability,
                                           Category::TechnicalImpact, Category::BusinessImpact};
inline constexpr std::array kAllLevels{Level::Low, Level::Medium, Level::High};

// Canonical names: "threat_agent", "LOW", "HIGH", "mean_of_category_means", ...
std::string_view to_string(Category c);
std::string_view to_string(Level l);
std::string_view to_string(Severity s);
std::string_view to_string(ImpactMode m);
// "Low" / "Medium" / "High", as shown in matrix cells.
std::string_view display_name(Level l);

Category parse_category(std::string_view text);
Level parse_level(std::string_view text);
Severity parse_severity(std::string_view text);
ImpactMode parse_impact_mode(std::string_view text);

inline constexpr int kMinScore = 0;
inline constexpr int kMaxScore = 9;

struct Anchor {
    int value = 0;
    std::string label;

    friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct FactorDefinition {
    std::string id;
    std::string display_name;
    Category category = Category::ThreatAgent;
    std::vector<Anchor> anchors;  // strictly increasing by value
    Rational weight{1};

    // Label of the anchor at exactly `score`, if any.
    std::optional<std::string_view> anchor_label(int score) const;

    friend bool operator==(const FactorDefinition&, const FactorDefinition&) = default;
};

struct Thresholds {
    Rational medium_from{3};  // scores below this are LOW
    Rational high_from{6};    // scores at or above this are HIGH

    friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

// Rows are likelihood levels, columns impact levels. Cells may be empty in a
// user-supplied scheme; validate_scheme reports that as an error.
using SeverityChart = std::array<std::array<std::optional<Severity>, 3>, 3>;

struct RatingScheme {
    std::string id;
    std::vector<FactorDefinition> factors;
    Thresholds likelihood_thresholds;
    Thresholds impact_thresholds;
    SeverityChart severity_chart{};
    ImpactMode impact_mode = ImpactMode::MeanOfCategoryMeans;

    const FactorDefinition* find_factor(std::string_view id) const;
    std::vector<const FactorDefinition*> factors_in(Category c) const;

    friend bool operator==(const RatingScheme&, const RatingScheme&) = default;
};

// The OWASP risk rating defaults: sixteen equal-weight factors, half-open
// level bands [0,3) [3,6) [6,9] and the standard 3x3 severity chart.
const RatingScheme& default_scheme();

struct FactorAssignment {
    std::string factor_id;
    int score = 0;
    std::optional<std::string> anchor_label;
    std::string rationale;

    friend bool operator==(const FactorAssignment&, const FactorAssignment&) = default;
};

struct RiskRating {
    Rational likelihood_score;
    Rational technical_impact_score;
    Rational business_impact_score;
    Rational final_impact_score;
    Level likelihood_level = Level::Low;
    Level impact_level = Level::Low;
    Severity severity = Severity::Note;

    friend bool operator==(const RiskRating&, const RiskRating&) = default;
};

struct ImpactScores {
    Rational technical;
    Rational business;
    Rational final;

    friend bool operator==(const ImpactScores&, const ImpactScores&) = default;
};

struct ValidationIssue {
    enum class Kind { Error, Warning };
    Kind kind = Kind::Error;
    std::string code;     // short machine tag, e.g. "thresholds_not_ascending"
    std::string message;
    std::string locus;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    void error(std::string code, std::string message, std::string locus = {});
    void warning(std::string code, std::string message, std::string locus = {});

    bool ok() const noexcept { return error_count() == 0; }
    std::size_t error_count() const noexcept;
    std::size_t warning_count() const noexcept;
    bool has(std::string_view code) const noexcept;
};

ValidationReport validate_scheme(const RatingScheme& scheme);

// Weighted mean sum(w*s)/sum(w) over the weighted factors of one category.
// Throws IncompleteFactorsError naming every unassigned weighted factor and
// Error(Validation) for out-of-range scores or unknown factor ids.
Rational category_score(std::span<const FactorAssignment> assignments, const RatingScheme& scheme,
                        Category category);

// Weighted mean over the union of threat-agent and vulnerability factors.
Rational likelihood_score(std::span<const FactorAssignment> assignments, const RatingScheme& scheme);

ImpactScores impact_scores(std::span<const FactorAssignment> assignments, const RatingScheme& scheme);

// LOW iff score < medium_from, HIGH iff score >= high_from, else MEDIUM.
// Throws Error(Domain) when score lies outside [0, 9].
Level classify(const Rational& score, const Thresholds& thresholds);

Severity severity(Level likelihood, Level impact, const SeverityChart& chart);

// Full composition. All missing factors across all four categories are
// reported together in a single IncompleteFactorsError.
RiskRating evaluate(std::span<const FactorAssignment> assignments, const RatingScheme& scheme);

}  // namespace llmrisk::rating
