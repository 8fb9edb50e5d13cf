#pragma once

#include "llmrisk/catalog.hpp"
#include "llmrisk/rating.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace llmrisk::assessment {

using rating::FactorAssignment;

enum class Status { Identified, Analyzed, Evaluated, Treated, Monitored };

inline constexpr std::array kAllStatuses{Status::Identified, Status::Analyzed, Status::Evaluated, Status::Treated,
                                         Status::Monitored};

std::string_view to_string(Status s);  // "identified", ...
Status parse_status(std::string_view text);

// Step 1: who attacks and how. Holds the threat-agent factors.
struct ScenarioAnalysis {
    std::string threat_agent;
    std::string method;
    std::vector<FactorAssignment> assignments;

    friend bool operator==(const ScenarioAnalysis&, const ScenarioAnalysis&) = default;
};

struct DependentComponent {
    std::string name;
    std::string weakness;

    friend bool operator==(const DependentComponent&, const DependentComponent&) = default;
};

// Step 2: system components mapped against the vulnerability factors.
struct DependencyMapping {
    std::vector<DependentComponent> components;
    std::vector<FactorAssignment> assignments;

    friend bool operator==(const DependencyMapping&, const DependencyMapping&) = default;
};

// Step 3: technical and business consequences of a successful exploit.
struct ImpactAnalysis {
    std::vector<FactorAssignment> technical;
    std::vector<FactorAssignment> business;

    friend bool operator==(const ImpactAnalysis&, const ImpactAnalysis&) = default;
};

// A what-if mitigation expressed as absolute score overrides.
struct ControlAdjustment {
    std::string label;
    std::map<std::string, int> overrides;  // factor id -> new score
    std::string note;

    friend bool operator==(const ControlAdjustment&, const ControlAdjustment&) = default;
};

struct Treatment {
    std::string disposition;  // free text: mitigate / transfer / accept ...
    std::string acceptance_note;
    std::vector<ControlAdjustment> adjustments;

    friend bool operator==(const Treatment&, const Treatment&) = default;
};

struct Derivation {
    std::string source_id;
    std::uint64_t source_revision = 0;
    std::string adjustment_label;

    friend bool operator==(const Derivation&, const Derivation&) = default;
};

struct AssessmentDocument {
    std::string id;
    std::string threat;  // catalog id or threat name
    std::string system_context;
    catalog::StakeholderGroup stakeholder = catalog::StakeholderGroup::FineTuningDeveloper;
    std::optional<ScenarioAnalysis> scenario;
    std::optional<DependencyMapping> dependencies;
    std::optional<ImpactAnalysis> impact;
    Status status = Status::Identified;
    std::string scheme = "default";
    std::uint64_t revision = 0;
    Treatment treatment;
    std::vector<std::string> review_notes;
    std::optional<Derivation> derived_from;

    bool has_all_sections() const { return scenario && dependencies && impact; }

    // Every assignment across the three sections, in section order.
    std::vector<FactorAssignment> assignments() const;

    friend bool operator==(const AssessmentDocument&, const AssessmentDocument&) = default;
};

// Ids double as file names: 1-128 chars of [A-Za-z0-9_.-], no leading dot.
bool is_valid_document_id(std::string_view id);

// Errors: structural invariant violations, completeness gaps at or beyond
// Evaluated. Warnings: unresolved threat reference, missing rationale,
// completeness gaps before Evaluated, anchor label mismatches.
// Issues about unassigned factors always carry code "incomplete_factors".
rating::ValidationReport validate_document(const AssessmentDocument& doc, const catalog::Catalog& catalog,
                                           const rating::RatingScheme& scheme);

// Throws IncompleteFactorsError listing every missing factor.
rating::RiskRating evaluate_document(const AssessmentDocument& doc, const rating::RatingScheme& scheme);

// Moves to the immediate successor state. Throws Error(Sequencing) when
// `target` is not the successor, Error(Guard) naming the unmet guard otherwise.
AssessmentDocument advance_status(const AssessmentDocument& doc, Status target, const rating::RatingScheme& scheme);

// Throws Error(Validation) for unknown factors or out-of-range scores.
void check_adjustment(const ControlAdjustment& adjustment, const rating::RatingScheme& scheme);

struct AdjustmentOutcome {
    AssessmentDocument derived;
    rating::RiskRating before;
    rating::RiskRating after;
};

// Returns a new document (revision + 1) with the overrides applied and the
// adjustment recorded under treatment. `doc` is not modified.
AdjustmentOutcome apply_adjustment(const AssessmentDocument& doc, const ControlAdjustment& adjustment,
                                   const rating::RatingScheme& scheme);

}  // namespace llmrisk::assessment
