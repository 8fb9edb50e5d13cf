#include "llmrisk/catalog.hpp"

#include "llmrisk/codec.hpp"
#include "llmrisk/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace llmrisk::catalog {

std::string_view to_string(StakeholderGroup g) {
    switch (g) {
        case StakeholderGroup::FineTuningDeveloper: return "fine_tuning_developer";
        case StakeholderGroup::ApiIntegrationDeveloper: return "api_integration_developer";
        case StakeholderGroup::EndUser: return "end_user";
    }
    return "?";
}

std::string_view display_name(StakeholderGroup g) {
    switch (g) {
        case StakeholderGroup::FineTuningDeveloper: return "LLM Fine-tuning Developers";
        case StakeholderGroup::ApiIntegrationDeveloper: return "LLM API Integration Developers";
        case StakeholderGroup::EndUser: return "End Users";
    }
    return "?";
}

StakeholderGroup parse_stakeholder(std::string_view text) {
    for (StakeholderGroup g : kAllStakeholders) {
        if (to_string(g) == text) {
            return g;
        }
    }
    throw Error(ErrorCode::Parse, "unknown stakeholder group '" + std::string(text) + "'", std::string(text));
}

bool ThreatEntry::concerns(StakeholderGroup g) const {
    return std::find(stakeholders.begin(), stakeholders.end(), g) != stakeholders.end();
}

const ThreatEntry* Catalog::find(std::string_view id_or_name) const {
    for (const auto& e : entries) {
        if (e.id == id_or_name) return &e;
    }
    for (const auto& e : entries) {
        if (e.name == id_or_name) return &e;
    }
    return nullptr;
}

namespace {

bool valid_threat_id(std::string_view id) {
    return id.size() == 5 && id.substr(0, 3) == "LLM" && std::isdigit(static_cast<unsigned char>(id[3])) &&
           std::isdigit(static_cast<unsigned char>(id[4]));
}

Catalog build_bundled() {
    using G = StakeholderGroup;
    const std::vector<G> all{G::FineTuningDeveloper, G::ApiIntegrationDeveloper, G::EndUser};

    Catalog c;
    c.source = "bundled";
    c.version = "owasp-llm-1.1.0";

    // Codes follow the OWASP Top 10 for LLM v1.1.0 ordering. The published
    // reference matrix these attributes come from numbers Insecure Plugin
    // Design as LLM02 and Insecure Output Handling as LLM07; attributes are
    // attached here by threat name, so that swap does not affect any row.
    c.entries = {
        {"LLM01",
         "Prompt Injection",
         {"Lack of control/validation on LLM's input", "LLM's implicit nature or design/architecture"},
         {"Reputation loss", "Partial IP loss", "Performance degradation", "User harm"},
         {"Use trusted/reputed LLM service provider", "Input validation and filtering"},
         {"Adaptive trust boundaries for input source", "Monitoring of LLM outputs", "Red teaming",
          "LLM response monitoring/filtering"},
         false,
         all},
        {"LLM02",
         "Insecure Output Handling",
         {"General purpose LLM's ability to generate arbitrary code and text",
          "Improper input validation or output scrutiny"},
         {"IP loss", "Compromised system and data", "User harm"},
         {"Proper validation/filtering of output", "Output encoding to mitigate code execution", "Rate limiting"},
         {},
         false,
         all},
        {"LLM03",
         "Training Data Poisoning",
         {"Poor vetting/verification of training data and data source"},
         {"Reputation loss", "Model integrity loss", "Financial damage", "Misinformation and bias",
          "Performance degradation", "User harm"},
         {"Exhaustive analysis and sanitisation of all unvetted training dataset"},
         {},
         false,
         {G::FineTuningDeveloper, G::EndUser}},
        {"LLM04",
         "Model Denial of Service",
         {"Poor design and implementation", "Improper input validation"},
         {"Financial and reputation loss"},
         {"Use proper input validation and filtering", "Rate-limiting", "Usage limit per user",
          "Adversarial input detection"},
         {"Resource utilisation monitoring"},
         true,
         all},
        {"LLM05",
         "Supply Chain Vulnerabilities",
         {"Poor security review and vetting of 3rd party components used"},
         {"Variable - Compromised system", "Performance degradation"},
         {"Use only trusted/reputed 3rd party software and components"},
         {},
         true,
         {G::FineTuningDeveloper, G::ApiIntegrationDeveloper}},
        // The dynamic control line for this threat is empty in the source matrix.
        {"LLM06",
         "Sensitive Information Disclosure",
         {"Incomplete training data sanitization", "Training data memorisation"},
         {"Privacy violation", "Reputation damage", "Partial IP loss", "User harm"},
         {"Training data monitoring to weed out sensitive information", "Differential privacy mechanisms",
          "Encrypt sensitive information"},
         {},
         false,
         all},
        {"LLM07",
         "Insecure Plugin Design",
         {"Improper access control", "Poor design and implementation"},
         {"Compromised system"},
         {"Input sanitisation, parameterisation, validation", "Protect against all REST API security risks"},
         {"Proper authorisation and authentication"},
         true,
         {G::FineTuningDeveloper, G::ApiIntegrationDeveloper}},
        {"LLM08",
         "Excessive Agency",
         {"Design and implementation choices", "Improper access control"},
         {"Variable - Compromised system"},
         {"Limit the permissions of LLMs", "Use components with granular functionalities rather than open-ended ones"},
         {"Implement proper authorisation"},
         false,
         all},
        {"LLM09",
         "Overreliance",
         {"Blindly trusting LLM generated content without review"},
         {"Misinformation", "Implementation of incorrect solutions"},
         {"User awareness"},
         {"Output validation and review"},
         false,
         {G::EndUser}},
        {"LLM10",
         "Model Theft",
         {"Weak access control", "Insider threats", "Model inversion"},
         {"Reputation loss", "Model integrity loss", "Financial damage", "Misinformation", "Privacy violation"},
         {"Model obfuscation"},
         {"Strong access controls and authentication", "Regular auditing"},
         false,
         {G::FineTuningDeveloper}},
    };
    return c;
}

}  // namespace

const Catalog& bundled_catalog() {
    static const Catalog catalog = build_bundled();
    return catalog;
}

void check_catalog(const Catalog& catalog) {
    if (catalog.entries.empty()) {
        throw Error(ErrorCode::Parse, "no entries", catalog.source);
    }
    std::set<std::string> ids;
    for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
        const auto& e = catalog.entries[i];
        const std::string locus = e.id.empty() ? "entries[" + std::to_string(i) + "]" : e.id;
        if (!valid_threat_id(e.id)) {
            throw Error(ErrorCode::Validation, "threat id '" + e.id + "' does not match LLM<two digits>", locus);
        }
        if (!ids.insert(e.id).second) {
            throw Error(ErrorCode::Validation, "duplicate threat id '" + e.id + "'", locus);
        }
        if (e.name.empty()) {
            throw Error(ErrorCode::Validation, "threat " + e.id + " has no name", locus);
        }
        if (e.stakeholders.empty()) {
            throw Error(ErrorCode::Validation, "threat " + e.id + " has an empty stakeholder set", locus);
        }
        std::set<StakeholderGroup> groups(e.stakeholders.begin(), e.stakeholders.end());
        if (groups.size() != e.stakeholders.size()) {
            throw Error(ErrorCode::Validation, "threat " + e.id + " lists a stakeholder group twice", locus);
        }
    }
}

Catalog load_catalog(const std::filesystem::path& path) {
    const std::string text = codec::read_text_file(path);
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorCode::Parse, "no entries", path.string());
    }
    Catalog catalog = codec::catalog_from_json(codec::parse(text, path.string()));
    catalog.source = path.string();
    check_catalog(catalog);
    return catalog;
}

std::vector<ThreatEntry> filter_by_stakeholder(const Catalog& catalog, StakeholderGroup group) {
    std::vector<ThreatEntry> out;
    std::copy_if(catalog.entries.begin(), catalog.entries.end(), std::back_inserter(out),
                 [&](const ThreatEntry& e) { return e.concerns(group); });
    return out;
}

std::vector<ThreatEntry> filter_traditional(const Catalog& catalog, bool traditional) {
    std::vector<ThreatEntry> out;
    std::copy_if(catalog.entries.begin(), catalog.entries.end(), std::back_inserter(out),
                 [&](const ThreatEntry& e) { return e.traditional_cybersec == traditional; });
    return out;
}

}  // namespace llmrisk::catalog
