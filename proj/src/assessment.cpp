#include "llmrisk/assessment.hpp"

#include "llmrisk/error.hpp"

#include <algorithm>
#include <iterator>
#include <set>

namespace llmrisk::assessment {

using rating::Category;
using rating::RatingScheme;
using rating::ValidationReport;

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Identified: return "identified";
        case Status::Analyzed: return "analyzed";
        case Status::Evaluated: return "evaluated";
        case Status::Treated: return "treated";
        case Status::Monitored: return "monitored";
    }
    return "?";
}

Status parse_status(std::string_view text) {
    for (Status s : kAllStatuses) {
        if (to_string(s) == text) return s;
    }
    throw Error(ErrorCode::Parse, "unknown status '" + std::string(text) + "'");
}

std::vector<FactorAssignment> AssessmentDocument::assignments() const {
    std::vector<FactorAssignment> out;
    auto append = [&out](const std::vector<FactorAssignment>& v) { out.insert(out.end(), v.begin(), v.end()); };
    if (scenario) append(scenario->assignments);
    if (dependencies) append(dependencies->assignments);
    if (impact) {
        append(impact->technical);
        append(impact->business);
    }
    return out;
}

namespace {

struct SectionView {
    std::string_view name;
    const std::vector<FactorAssignment>* assignments;
    Category category;
};

std::vector<SectionView> sections_of(const AssessmentDocument& doc) {
    std::vector<SectionView> out;
    if (doc.scenario) out.push_back({"scenario", &doc.scenario->assignments, Category::ThreatAgent});
    if (doc.dependencies) out.push_back({"dependencies", &doc.dependencies->assignments, Category::Vulnerability});
    if (doc.impact) {
        out.push_back({"impact.technical", &doc.impact->technical, Category::TechnicalImpact});
        out.push_back({"impact.business", &doc.impact->business, Category::BusinessImpact});
    }
    return out;
}

std::vector<FactorAssignment>* section_for(AssessmentDocument& doc, Category c) {
    switch (c) {
        case Category::ThreatAgent:
            if (!doc.scenario) doc.scenario.emplace();
            return &doc.scenario->assignments;
        case Category::Vulnerability:
            if (!doc.dependencies) doc.dependencies.emplace();
            return &doc.dependencies->assignments;
        case Category::TechnicalImpact:
            if (!doc.impact) doc.impact.emplace();
            return &doc.impact->technical;
        case Category::BusinessImpact:
            if (!doc.impact) doc.impact.emplace();
            return &doc.impact->business;
    }
    return nullptr;
}

std::vector<std::string> missing_factors(const AssessmentDocument& doc, const RatingScheme& scheme) {
    std::set<std::string, std::less<>> assigned;
    for (const auto& a : doc.assignments()) assigned.insert(a.factor_id);
    std::vector<std::string> missing;
    for (const auto& f : scheme.factors) {
        if (Rational{0} < f.weight && !assigned.contains(f.id)) {
            missing.push_back(f.id);
        }
    }
    return missing;
}

}  // namespace

bool is_valid_document_id(std::string_view id) {
    if (id.empty() || id.size() > 128 || id.front() == '.') return false;
    for (char ch : id) {
        const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                        ch == '_' || ch == '-' || ch == '.';
        if (!ok) return false;
    }
    return true;
}

ValidationReport validate_document(const AssessmentDocument& doc, const catalog::Catalog& catalog,
                                   const RatingScheme& scheme) {
    ValidationReport report;

    if (!is_valid_document_id(doc.id)) {
        report.error("invalid_id", "document id '" + doc.id + "' must be 1-128 chars of [A-Za-z0-9_.-]", doc.id);
    }
    if (doc.threat.empty()) {
        report.error("missing_threat", "document has no threat reference", doc.id);
    } else if (catalog.find(doc.threat) == nullptr) {
        report.warning("unresolved_threat", "unresolved threat reference '" + doc.threat + "'", doc.threat);
    }
    if (doc.scheme != scheme.id) {
        report.warning("scheme_mismatch",
                       "document names scheme '" + doc.scheme + "' but is checked against '" + scheme.id + "'",
                       doc.scheme);
    }

    std::set<std::string, std::less<>> seen;
    for (const auto& section : sections_of(doc)) {
        for (const auto& a : *section.assignments) {
            const auto* factor = scheme.find_factor(a.factor_id);
            if (factor == nullptr) {
                report.error("unknown_factor", "unknown factor '" + a.factor_id + "' in " + std::string(section.name),
                             a.factor_id);
                continue;
            }
            if (factor->category != section.category) {
                report.error("wrong_section",
                             "factor '" + a.factor_id + "' is " + std::string(rating::to_string(factor->category)) +
                                 " and cannot appear in " + std::string(section.name),
                             a.factor_id);
            }
            if (!seen.insert(a.factor_id).second) {
                report.error("duplicate_assignment", "factor '" + a.factor_id + "' assigned twice", a.factor_id);
            }
            if (a.score < rating::kMinScore || a.score > rating::kMaxScore) {
                report.error("score_out_of_range",
                             "score " + std::to_string(a.score) + " for '" + a.factor_id + "' outside [0,9]",
                             a.factor_id);
                continue;
            }
            if (a.rationale.empty()) {
                report.warning("missing_rationale", "factor '" + a.factor_id + "' has no rationale", a.factor_id);
            }
            if (a.anchor_label) {
                const auto expected = factor->anchor_label(a.score);
                if (!expected || *expected != *a.anchor_label) {
                    report.warning("anchor_mismatch",
                                   "label '" + *a.anchor_label + "' is not the scheme anchor at score " +
                                       std::to_string(a.score) + " for '" + a.factor_id + "'",
                                   a.factor_id);
                }
            }
        }
    }

    if (doc.status >= Status::Analyzed) {
        if (!doc.scenario) report.error("missing_section", "status requires a scenario analysis", "scenario");
        if (!doc.dependencies) {
            report.error("missing_section", "status requires a dependency mapping", "dependencies");
        }
        if (!doc.impact) report.error("missing_section", "status requires an impact analysis", "impact");
    }

    const bool completeness_required = doc.status >= Status::Evaluated;
    for (const auto& id : missing_factors(doc, scheme)) {
        if (completeness_required) {
            report.error("incomplete_factors", "factor '" + id + "' is not assigned", id);
        } else {
            report.warning("incomplete_factors", "factor '" + id + "' is not assigned yet", id);
        }
    }

    if (doc.status >= Status::Treated && doc.treatment.adjustments.empty() && doc.treatment.acceptance_note.empty()) {
        report.error("untreated", "status requires a control adjustment or an acceptance note", "treatment");
    }
    for (const auto& adj : doc.treatment.adjustments) {
        for (const auto& [factor_id, score] : adj.overrides) {
            if (scheme.find_factor(factor_id) == nullptr) {
                report.error("unknown_factor", "adjustment '" + adj.label + "' overrides unknown factor '" +
                                                   factor_id + "'",
                             factor_id);
            } else if (score < rating::kMinScore || score > rating::kMaxScore) {
                report.error("score_out_of_range",
                             "adjustment '" + adj.label + "' sets '" + factor_id + "' outside [0,9]", factor_id);
            }
        }
    }
    return report;
}

rating::RiskRating evaluate_document(const AssessmentDocument& doc, const RatingScheme& scheme) {
    const auto assignments = doc.assignments();
    return rating::evaluate(assignments, scheme);
}

AssessmentDocument advance_status(const AssessmentDocument& doc, Status target, const RatingScheme& scheme) {
    const auto current = static_cast<int>(doc.status);
    if (static_cast<int>(target) != current + 1) {
        throw Error(ErrorCode::Sequencing,
                    "cannot move from " + std::string(to_string(doc.status)) + " to " +
                        std::string(to_string(target)) + "; transitions must follow identified -> analyzed -> "
                        "evaluated -> treated -> monitored",
                    doc.id);
    }

    switch (target) {
        case Status::Identified:
            break;
        case Status::Analyzed:
            if (!doc.has_all_sections()) {
                throw Error(ErrorCode::Guard,
                            "guard 'all_sections_present' unmet: analyzed requires scenario, dependencies and impact",
                            doc.id);
            }
            break;
        case Status::Evaluated: {
            const auto missing = missing_factors(doc, scheme);
            if (!missing.empty()) {
                std::string names;
                for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
                throw Error(ErrorCode::Guard, "guard 'all_factors_assigned' unmet: missing " + names,
                            missing.front());
            }
            // Surfaces structural problems (duplicates, bad scores) as well.
            (void)evaluate_document(doc, scheme);
            break;
        }
        case Status::Treated:
            if (doc.treatment.adjustments.empty() && doc.treatment.acceptance_note.empty()) {
                throw Error(ErrorCode::Guard,
                            "guard 'treatment_recorded' unmet: treated requires a control adjustment or an "
                            "acceptance note",
                            doc.id);
            }
            break;
        case Status::Monitored:
            break;
    }

    AssessmentDocument next = doc;
    next.status = target;
    next.revision = doc.revision + 1;
    return next;
}

void check_adjustment(const ControlAdjustment& adjustment, const RatingScheme& scheme) {
    for (const auto& [factor_id, score] : adjustment.overrides) {
        if (scheme.find_factor(factor_id) == nullptr) {
            throw Error(ErrorCode::Validation, "adjustment overrides unknown factor '" + factor_id + "'", factor_id);
        }
        if (score < rating::kMinScore || score > rating::kMaxScore) {
            throw Error(ErrorCode::Validation,
                        "adjustment sets '" + factor_id + "' to " + std::to_string(score) + ", outside [0,9]",
                        factor_id);
        }
    }
}

AdjustmentOutcome apply_adjustment(const AssessmentDocument& doc, const ControlAdjustment& adjustment,
                                   const RatingScheme& scheme) {
    check_adjustment(adjustment, scheme);
    const rating::RiskRating before = evaluate_document(doc, scheme);

    AssessmentDocument derived = doc;
    for (const auto& [factor_id, score] : adjustment.overrides) {
        const auto* factor = scheme.find_factor(factor_id);
        auto* section = section_for(derived, factor->category);
        auto it = std::find_if(section->begin(), section->end(),
                               [&](const FactorAssignment& a) { return a.factor_id == factor_id; });
        if (it == section->end()) {
            section->push_back({factor_id, score, std::nullopt, {}});
            it = std::prev(section->end());
        }
        it->score = score;
        if (auto label = factor->anchor_label(score)) {
            it->anchor_label = std::string(*label);
        } else {
            it->anchor_label.reset();
        }
        it->rationale = "adjusted by '" + adjustment.label + "'" + (adjustment.note.empty() ? "" : ": " + adjustment.note);
    }
    derived.revision = doc.revision + 1;
    derived.derived_from = Derivation{doc.id, doc.revision, adjustment.label};
    derived.treatment.adjustments.push_back(adjustment);

    const rating::RiskRating after = evaluate_document(derived, scheme);
    return {std::move(derived), before, after};
}

}  // namespace llmrisk::assessment
