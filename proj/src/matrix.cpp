#include "llmrisk/matrix.hpp"

#include "llmrisk/codec.hpp"
#include "llmrisk/error.hpp"

#include <map>

namespace llmrisk::matrix {

using assessment::AssessmentDocument;
using assessment::Status;

ThreatMatrix build_matrix(const catalog::Catalog& catalog, std::span<const AssessmentDocument> assessments,
                          const rating::RatingScheme& scheme, std::optional<catalog::StakeholderGroup> stakeholder_filter) {
    // threat id -> assessment
    std::map<std::string, const AssessmentDocument*> by_threat;
    for (const auto& doc : assessments) {
        const auto* entry = catalog.find(doc.threat);
        if (entry == nullptr) {
            throw Error(ErrorCode::Join, "assessment '" + doc.id + "' references unknown threat '" + doc.threat + "'",
                        doc.id);
        }
        auto [it, inserted] = by_threat.emplace(entry->id, &doc);
        if (!inserted) {
            throw Error(ErrorCode::Ambiguity,
                        "assessments '" + it->second->id + "' and '" + doc.id + "' both target " + entry->id, entry->id);
        }
    }

    ThreatMatrix m;
    m.scheme_id = scheme.id;
    m.catalog_version = catalog.version;
    m.stakeholder_filter = stakeholder_filter;
    for (const auto& entry : catalog.entries) {
        if (stakeholder_filter && !entry.concerns(*stakeholder_filter)) continue;
        MatrixRow row;
        row.threat = entry;
        if (auto it = by_threat.find(entry.id); it != by_threat.end()) {
            const AssessmentDocument& doc = *it->second;
            row.assessment_ref = doc.id;
            if (doc.status >= Status::Evaluated) {
                row.rating = assessment::evaluate_document(doc, scheme);
            }
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

Format parse_format(std::string_view text) {
    if (text == "csv") return Format::Csv;
    if (text == "md" || text == "markdown" || text == "markup_table") return Format::Markdown;
    if (text == "json" || text == "canonical_json") return Format::Json;
    throw Error(ErrorCode::Usage, "unknown format '" + std::string(text) + "' (expected csv, md or json)");
}

std::string render(const ThreatMatrix& matrix, Format format) {
    switch (format) {
        case Format::Csv: return render_csv(matrix);
        case Format::Markdown: return render_markdown(matrix);
        case Format::Json: return render_json(matrix);
    }
    throw Error(ErrorCode::Usage, "unknown format");
}

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i != 0) out += sep;
        out += items[i];
    }
    return out;
}

std::vector<std::string> stakeholder_names(const catalog::ThreatEntry& e) {
    std::vector<std::string> out;
    for (auto g : e.stakeholders) out.emplace_back(catalog::display_name(g));
    return out;
}

// Cell values in column order.
std::vector<std::string> row_cells(const MatrixRow& row, std::string_view list_sep) {
    const auto& t = row.threat;
    std::string likelihood, impact, severity;
    if (row.rating) {
        likelihood = rating::display_name(row.rating->likelihood_level);
        impact = rating::display_name(row.rating->impact_level);
        severity = rating::to_string(row.rating->severity);
    }
    return {t.id,
            t.name,
            join(t.causes, list_sep),
            join(t.consequences, list_sep),
            likelihood,
            impact,
            severity,
            join(t.static_controls, list_sep),
            join(t.dynamic_controls, list_sep),
            t.traditional_cybersec ? "Yes" : "No",
            join(stakeholder_names(t), list_sep)};
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n\r") == std::string::npos) {
        return value;
    }
    std::string out = "\"";
    for (char ch : value) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string markdown_cell(const std::string& value) {
    std::string out;
    for (char ch : value) {
        if (ch == '|') {
            out += "\\|";
        } else if (ch == '\n') {
            out += "<br>";
        } else if (ch != '\r') {
            out += ch;
        }
    }
    return out;
}

}  // namespace

std::string render_csv(const ThreatMatrix& matrix) {
    std::string out =
        "id,name,causes,consequences,likelihood,impact,risk_rating,static_controls,dynamic_controls,"
        "traditional_cybersec,stakeholders\n";
    for (const auto& row : matrix.rows) {
        const auto cells = row_cells(row, "\n");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i != 0) out += ',';
            out += csv_field(cells[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render_markdown(const ThreatMatrix& matrix) {
    std::string out =
        "| S.No | Risk Description | Causes | Consequences | Likelihood | Impact | Risk Rating | Static Controls | "
        "Dynamic Controls | Traditional Cybersec | Concerned Stakeholders |\n"
        "|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& row : matrix.rows) {
        out += '|';
        for (const auto& cell : row_cells(row, "\n")) {
            out += ' ' + markdown_cell(cell) + " |";
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const ThreatMatrix& matrix) { return codec::dump(codec::to_json(matrix)); }

}  // namespace llmrisk::matrix
