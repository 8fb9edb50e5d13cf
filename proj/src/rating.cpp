#include "llmrisk/rating.hpp"

#include "llmrisk/error.hpp"

#include <algorithm>
#include <initializer_list>
#include <map>
#include <set>

namespace llmrisk::rating {

std::string_view to_string(Category c) {
    switch (c) {
        case Category::ThreatAgent: return "threat_agent";
        case Category::Vulnerability: return "vulnerability";
        case Category::TechnicalImpact: return "technical_impact";
        case Category::BusinessImpact: return "business_impact";
    }
    return "?";
}

std::string_view to_string(Level l) {
    switch (l) {
        case Level::Low: return "LOW";
        case Level::Medium: return "MEDIUM";
        case Level::High: return "HIGH";
    }
    return "?";
}

std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::Note: return "NOTE";
        case Severity::Low: return "LOW";
        case Severity::Medium: return "MEDIUM";
        case Severity::High: return "HIGH";
        case Severity::Critical: return "CRITICAL";
    }
    return "?";
}

std::string_view to_string(ImpactMode m) {
    switch (m) {
        case ImpactMode::MeanOfCategoryMeans: return "mean_of_category_means";
        case ImpactMode::BusinessOnly: return "business_only";
    }
    return "?";
}

std::string_view display_name(Level l) {
    switch (l) {
        case Level::Low: return "Low";
        case Level::Medium: return "Medium";
        case Level::High: return "High";
    }
    return "?";
}

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::array<Enum, N>& values, std::string_view what) {
    for (Enum v : values) {
        if (to_string(v) == text) {
            return v;
        }
    }
    throw Error(ErrorCode::Parse, "unknown " + std::string(what) + ": '" + std::string(text) + "'");
}

}  // namespace

Category parse_category(std::string_view text) { return parse_enum(text, kAllCategories, "category"); }

Level parse_level(std::string_view text) { return parse_enum(text, kAllLevels, "level"); }

Severity parse_severity(std::string_view text) {
    constexpr std::array values{Severity::Note, Severity::Low, Severity::Medium, Severity::High, Severity::Critical};
    return parse_enum(text, values, "severity");
}

ImpactMode parse_impact_mode(std::string_view text) {
    constexpr std::array values{ImpactMode::MeanOfCategoryMeans, ImpactMode::BusinessOnly};
    return parse_enum(text, values, "impact mode");
}

std::optional<std::string_view> FactorDefinition::anchor_label(int score) const {
    for (const auto& anchor : anchors) {
        if (anchor.value == score) {
            return anchor.label;
        }
    }
    return std::nullopt;
}

const FactorDefinition* RatingScheme::find_factor(std::string_view factor_id) const {
    for (const auto& f : factors) {
        if (f.id == factor_id) {
            return &f;
        }
    }
    return nullptr;
}

std::vector<const FactorDefinition*> RatingScheme::factors_in(Category c) const {
    std::vector<const FactorDefinition*> out;
    for (const auto& f : factors) {
        if (f.category == c) {
            out.push_back(&f);
        }
    }
    return out;
}

void ValidationReport::error(std::string code, std::string message, std::string locus) {
    issues.push_back({ValidationIssue::Kind::Error, std::move(code), std::move(message), std::move(locus)});
}

void ValidationReport::warning(std::string code, std::string message, std::string locus) {
    issues.push_back({ValidationIssue::Kind::Warning, std::move(code), std::move(message), std::move(locus)});
}

std::size_t ValidationReport::error_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [](const auto& i) {
        return i.kind == ValidationIssue::Kind::Error;
    }));
}

std::size_t ValidationReport::warning_count() const noexcept { return issues.size() - error_count(); }

bool ValidationReport::has(std::string_view code) const noexcept {
    return std::any_of(issues.begin(), issues.end(), [&](const auto& i) { return i.code == code; });
}

namespace {

void check_thresholds(const Thresholds& t, std::string_view axis, ValidationReport& report) {
    const std::string locus = std::string(axis) + "_thresholds";
    if (!(t.medium_from < t.high_from)) {
        report.error("thresholds_not_ascending", "thresholds not ascending", locus);
    }
    if (!(Rational{0} < t.medium_from) || Rational{kMaxScore} < t.high_from) {
        report.error("thresholds_out_of_range", "thresholds must satisfy 0 < t1 < t2 <= 9", locus);
    }
}

}  // namespace

ValidationReport validate_scheme(const RatingScheme& scheme) {
    ValidationReport report;

    std::set<std::string> seen;
    for (const auto& f : scheme.factors) {
        if (f.id.empty()) {
            report.error("empty_factor_id", "factor with empty id");
        } else if (!seen.insert(f.id).second) {
            report.error("duplicate_factor", "duplicate factor id '" + f.id + "'", f.id);
        }
        if (f.weight < Rational{0}) {
            report.error("negative_weight", "factor '" + f.id + "' has a negative weight", f.id);
        }
        int previous = -1;
        for (const auto& anchor : f.anchors) {
            if (anchor.value < kMinScore || anchor.value > kMaxScore) {
                report.error("anchor_out_of_range",
                             "anchor " + std::to_string(anchor.value) + " of '" + f.id + "' outside [0,9]", f.id);
            } else if (anchor.value <= previous) {
                report.error("anchors_not_increasing", "anchors of '" + f.id + "' not strictly increasing", f.id);
            }
            previous = std::max(previous, anchor.value);
        }
    }

    for (Category c : kAllCategories) {
        const auto members = scheme.factors_in(c);
        const bool weighted = std::any_of(members.begin(), members.end(),
                                          [](const FactorDefinition* f) { return Rational{0} < f->weight; });
        if (!weighted) {
            report.error("category_unweighted",
                         "category '" + std::string(to_string(c)) + "' has no factor with positive weight",
                         std::string(to_string(c)));
        }
    }

    check_thresholds(scheme.likelihood_thresholds, "likelihood", report);
    check_thresholds(scheme.impact_thresholds, "impact", report);

    bool chart_total = true;
    for (std::size_t row = 0; row < 3; ++row) {
        for (std::size_t col = 0; col < 3; ++col) {
            if (!scheme.severity_chart[row][col]) {
                chart_total = false;
                report.error("missing_chart_cell",
                             "severity chart has no cell for likelihood " +
                                 std::string(to_string(kAllLevels[row])) + " x impact " +
                                 std::string(to_string(kAllLevels[col])),
                             "severity_chart");
            }
        }
    }

    if (chart_total) {
        bool monotone = true;
        for (std::size_t row = 0; row < 3; ++row) {
            for (std::size_t col = 0; col < 3; ++col) {
                const Severity here = *scheme.severity_chart[row][col];
                if (row + 1 < 3 && *scheme.severity_chart[row + 1][col] < here) monotone = false;
                if (col + 1 < 3 && *scheme.severity_chart[row][col + 1] < here) monotone = false;
            }
        }
        if (!monotone) {
            report.warning("non_monotone_chart", "non-monotone severity chart", "severity_chart");
        }
    }
    return report;
}

namespace {

// Resolves assignments against the scheme, rejecting unknown ids, duplicate
// assignments and out-of-range scores.
std::map<std::string, int, std::less<>> index_assignments(std::span<const FactorAssignment> assignments,
                                                          const RatingScheme& scheme) {
    std::map<std::string, int, std::less<>> scores;
    for (const auto& a : assignments) {
        if (scheme.find_factor(a.factor_id) == nullptr) {
            throw Error(ErrorCode::Validation, "unknown factor '" + a.factor_id + "'", a.factor_id);
        }
        if (a.score < kMinScore || a.score > kMaxScore) {
            throw Error(ErrorCode::Validation,
                        "score " + std::to_string(a.score) + " for '" + a.factor_id + "' outside [0,9]", a.factor_id);
        }
        if (!scores.emplace(a.factor_id, a.score).second) {
            throw Error(ErrorCode::Validation, "factor '" + a.factor_id + "' assigned twice", a.factor_id);
        }
    }
    return scores;
}

struct MeanResult {
    std::optional<Rational> value;
    std::vector<std::string> missing;
};

MeanResult weighted_mean(const std::map<std::string, int, std::less<>>& scores, const RatingScheme& scheme,
                         std::initializer_list<Category> categories) {
    MeanResult result;
    Rational numerator{0};
    Rational weight_sum{0};
    for (const auto& f : scheme.factors) {
        if (std::find(categories.begin(), categories.end(), f.category) == categories.end()) continue;
        if (!(Rational{0} < f.weight)) continue;
        const auto it = scores.find(f.id);
        if (it == scores.end()) {
            result.missing.push_back(f.id);
            continue;
        }
        numerator += f.weight * Rational{it->second};
        weight_sum += f.weight;
    }
    if (!result.missing.empty()) {
        return result;
    }
    if (weight_sum.is_zero()) {
        std::string names;
        for (Category c : categories) names += (names.empty() ? "" : "+") + std::string(to_string(c));
        throw Error(ErrorCode::Validation, "no weighted factors in " + names, names);
    }
    result.value = numerator / weight_sum;
    return result;
}

Rational require(MeanResult r) {
    if (!r.missing.empty()) {
        throw IncompleteFactorsError(std::move(r.missing));
    }
    return *r.value;
}

ImpactScores combine_impact(Rational technical, Rational business, ImpactMode mode) {
    Rational final_score = mode == ImpactMode::BusinessOnly ? business : (technical + business) / Rational{2};
    return {technical, business, final_score};
}

}  // namespace

Rational category_score(std::span<const FactorAssignment> assignments, const RatingScheme& scheme,
                        Category category) {
    return require(weighted_mean(index_assignments(assignments, scheme), scheme, {category}));
}

Rational likelihood_score(std::span<const FactorAssignment> assignments, const RatingScheme& scheme) {
    return require(weighted_mean(index_assignments(assignments, scheme), scheme,
                                 {Category::ThreatAgent, Category::Vulnerability}));
}

ImpactScores impact_scores(std::span<const FactorAssignment> assignments, const RatingScheme& scheme) {
    const auto scores = index_assignments(assignments, scheme);
    auto technical = weighted_mean(scores, scheme, {Category::TechnicalImpact});
    auto business = weighted_mean(scores, scheme, {Category::BusinessImpact});
    if (!technical.missing.empty() || !business.missing.empty()) {
        auto missing = std::move(technical.missing);
        missing.insert(missing.end(), business.missing.begin(), business.missing.end());
        throw IncompleteFactorsError(std::move(missing));
    }
    return combine_impact(*technical.value, *business.value, scheme.impact_mode);
}

Level classify(const Rational& score, const Thresholds& thresholds) {
    if (score < Rational{kMinScore} || Rational{kMaxScore} < score) {
        throw Error(ErrorCode::Domain, "score " + score.to_string() + " outside [0,9]");
    }
    if (score < thresholds.medium_from) return Level::Low;
    if (score < thresholds.high_from) return Level::Medium;
    return Level::High;
}

Severity severity(Level likelihood, Level impact, const SeverityChart& chart) {
    const auto& cell = chart[static_cast<std::size_t>(likelihood)][static_cast<std::size_t>(impact)];
    if (!cell) {
        throw Error(ErrorCode::Validation, "severity chart has no cell for " + std::string(to_string(likelihood)) +
                                               " x " + std::string(to_string(impact)),
                    "severity_chart");
    }
    return *cell;
}

RiskRating evaluate(std::span<const FactorAssignment> assignments, const RatingScheme& scheme) {
    const auto scores = index_assignments(assignments, scheme);
    auto likelihood = weighted_mean(scores, scheme, {Category::ThreatAgent, Category::Vulnerability});
    auto technical = weighted_mean(scores, scheme, {Category::TechnicalImpact});
    auto business = weighted_mean(scores, scheme, {Category::BusinessImpact});

    std::vector<std::string> missing = std::move(likelihood.missing);
    missing.insert(missing.end(), technical.missing.begin(), technical.missing.end());
    missing.insert(missing.end(), business.missing.begin(), business.missing.end());
    if (!missing.empty()) {
        throw IncompleteFactorsError(std::move(missing));
    }

    const ImpactScores impact = combine_impact(*technical.value, *business.value, scheme.impact_mode);
    RiskRating rating;
    rating.likelihood_score = *likelihood.value;
    rating.technical_impact_score = impact.technical;
    rating.business_impact_score = impact.business;
    rating.final_impact_score = impact.final;
    rating.likelihood_level = classify(rating.likelihood_score, scheme.likelihood_thresholds);
    rating.impact_level = classify(rating.final_impact_score, scheme.impact_thresholds);
    rating.severity = severity(rating.likelihood_level, rating.impact_level, scheme.severity_chart);
    return rating;
}

}  // namespace llmrisk::rating
