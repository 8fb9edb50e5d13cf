#include "llmrisk/rating.hpp"

namespace llmrisk::rating {

namespace {

FactorDefinition factor(std::string id, std::string name, Category category, std::vector<Anchor> anchors) {
    return {std::move(id), std::move(name), category, std::move(anchors), Rational{1}};
}

RatingScheme build_default() {
    using C = Category;
    RatingScheme s;
    s.id = "default";

    // Anchor labels follow the OWASP Risk Rating Methodology. Where the
    // methodology lists two labels at one value they are joined with " / ".
    s.factors = {
        factor("skill_level", "Skill level", C::ThreatAgent,
               {{1, "No technical skills"},
                {3, "Some technical skills"},
                {5, "Advanced computer user"},
                {6, "Network and programming skills"},
                {9, "Security penetration skills"}}),
        factor("motive", "Motive", C::ThreatAgent,
               {{1, "Low or no reward"}, {4, "Possible reward"}, {9, "High reward"}}),
        factor("opportunity", "Opportunity", C::ThreatAgent,
               {{0, "Full access or expensive resources required"},
                {4, "Special access or resources required"},
                {7, "Some access or resources required"},
                {9, "No access or resources required"}}),
        factor("size", "Size", C::ThreatAgent,
               {{2, "Developers / System administrators"},
                {4, "Intranet users"},
                {5, "Partners"},
                {6, "Authenticated users"},
                {9, "Anonymous Internet users"}}),

        factor("ease_of_discovery", "Ease of discovery", C::Vulnerability,
               {{1, "Practically impossible"}, {3, "Difficult"}, {7, "Easy"}, {9, "Automated tools available"}}),
        factor("ease_of_exploit", "Ease of exploit", C::Vulnerability,
               {{1, "Theoretical"}, {3, "Difficult"}, {5, "Easy"}, {9, "Automated tools available"}}),
        factor("awareness", "Awareness", C::Vulnerability,
               {{1, "Unknown"}, {4, "Hidden"}, {6, "Obvious"}, {9, "Public knowledge"}}),
        factor("intrusion_detection", "Intrusion detection", C::Vulnerability,
               {{1, "Active detection in application"},
                {3, "Logged and reviewed"},
                {8, "Logged without review"},
                {9, "Not logged"}}),

        // The bundled prompt-injection assessment labels confidentiality 5
        // "Extensive critical data disclosed"; kept next to the standard 7.
        factor("loss_of_confidentiality", "Loss of confidentiality", C::TechnicalImpact,
               {{2, "Minimal non-sensitive data disclosed"},
                {5, "Extensive critical data disclosed"},
                {6, "Minimal critical data disclosed / Extensive non-sensitive data disclosed"},
                {7, "Extensive critical data disclosed"},
                {9, "All data disclosed"}}),
        factor("loss_of_integrity", "Loss of integrity", C::TechnicalImpact,
               {{1, "Minimal slightly corrupt data"},
                {3, "Minimal seriously corrupt data"},
                {5, "Extensive slightly corrupt data"},
                {7, "Extensive seriously corrupt data"},
                {9, "All data totally corrupt"}}),
        factor("loss_of_availability", "Loss of availability", C::TechnicalImpact,
               {{1, "Minimal secondary services interrupted"},
                {5, "Minimal primary services interrupted / Extensive secondary services interrupted"},
                {7, "Extensive primary services interrupted"},
                {9, "All services completely lost"}}),
        factor("loss_of_accountability", "Loss of accountability", C::TechnicalImpact,
               {{1, "Fully traceable"}, {7, "Possibly traceable"}, {9, "Completely anonymous"}}),

        factor("financial_damage", "Financial damage", C::BusinessImpact,
               {{1, "Less than the cost to fix the vulnerability"},
                {3, "Minor effect on annual profit"},
                {7, "Significant effect on annual profit"},
                {9, "Bankruptcy"}}),
        factor("reputation_damage", "Reputation damage", C::BusinessImpact,
               {{1, "Minimal damage"}, {4, "Loss of major accounts"}, {5, "Loss of goodwill"}, {9, "Brand damage"}}),
        factor("non_compliance", "Non-compliance", C::BusinessImpact,
               {{2, "Minor violation"}, {5, "Clear violation"}, {7, "High profile violation"}}),
        factor("privacy_violation", "Privacy violation", C::BusinessImpact,
               {{3, "One individual"}, {5, "Hundreds of people"}, {7, "Thousands of people"}, {9, "Millions of people"}}),
    };

    s.likelihood_thresholds = {Rational{3}, Rational{6}};
    s.impact_thresholds = {Rational{3}, Rational{6}};

    using S = Severity;
    // rows: likelihood LOW, MEDIUM, HIGH; columns: impact LOW, MEDIUM, HIGH
    s.severity_chart = {{
        {S::Note, S::Low, S::Medium},
        {S::Low, S::Medium, S::High},
        {S::Medium, S::High, S::Critical},
    }};
    s.impact_mode = ImpactMode::MeanOfCategoryMeans;
    return s;
}

}  // namespace

const RatingScheme& default_scheme() {
    static const RatingScheme scheme = build_default();
    return scheme;
}

}  // namespace llmrisk::rating
