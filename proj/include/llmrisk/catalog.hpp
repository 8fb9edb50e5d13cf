#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace llmrisk::catalog {

enum class StakeholderGroup { FineTuningDeveloper, ApiIntegrationDeveloper, EndUser };

inline constexpr std::array kAllStakeholders{StakeholderGroup::FineTuningDeveloper,
                                             StakeholderGroup::ApiIntegrationDeveloper, StakeholderGroup::EndUser};

// "fine_tuning_developer", "api_integration_developer", "end_user"
std::string_view to_string(StakeholderGroup g);
// "LLM Fine-tuning Developers", ...
std::string_view display_name(StakeholderGroup g);
StakeholderGroup parse_stakeholder(std::string_view text);

struct ThreatEntry {
    std::string id;  // LLM01..LLM10 for the bundled set
    std::string name;
    std::vector<std::string> causes;
    std::vector<std::string> consequences;
    std::vector<std::string> static_controls;
    std::vector<std::string> dynamic_controls;
    bool traditional_cybersec = false;
    std::vector<StakeholderGroup> stakeholders;  // non-empty, no duplicates

    bool concerns(StakeholderGroup g) const;

    friend bool operator==(const ThreatEntry&, const ThreatEntry&) = default;
};

struct Catalog {
    std::vector<ThreatEntry> entries;
    std::string source = "bundled";  // "bundled" or the file path it was read from
    std::string version;             // content version, e.g. "owasp-llm-1.1.0"

    // Matches by id first, then by exact name.
    const ThreatEntry* find(std::string_view id_or_name) const;

    friend bool operator==(const Catalog&, const Catalog&) = default;
};

// The OWASP Top 10 for LLM Applications (v1.1.0) with causes, consequences,
// controls and stakeholder mapping.
const Catalog& bundled_catalog();

// Throws Error(Validation) with the offending entry as locus on duplicate or
// malformed ids and empty stakeholder sets; Error(Parse) on "no entries".
void check_catalog(const Catalog& catalog);

// Reads a catalog document from disk (see codec.hpp for the format).
Catalog load_catalog(const std::filesystem::path& path);

std::vector<ThreatEntry> filter_by_stakeholder(const Catalog& catalog, StakeholderGroup group);
std::vector<ThreatEntry> filter_traditional(const Catalog& catalog, bool traditional);

}  // namespace llmrisk::catalog
