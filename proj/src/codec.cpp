#include "llmrisk/codec.hpp"

#include <fstream>
#include <sstream>

namespace llmrisk::codec {

using assessment::AssessmentDocument;
using assessment::ControlAdjustment;
using rating::FactorAssignment;

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'", path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::Io, "error reading '" + path.string() + "'", path.string());
    }
    return buffer.str();
}

Json parse(std::string_view text, std::string_view origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::Parse, "malformed document " + std::string(origin) + ": " + e.what(),
                    std::string(origin));
    }
}

Json read_json_file(const std::filesystem::path& path) { return parse(read_text_file(path), path.string()); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string kind_of(const Json& j) {
    if (j.is_object()) {
        if (auto it = j.find("kind"); it != j.end() && it->is_string()) {
            return it->get<std::string>();
        }
    }
    return {};
}

namespace {

// Small accessors that turn type mismatches into Error(Parse) with a JSON path.

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::Parse, path + ": " + what, path);
}

void require_object(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

const Json& field(const Json& j, const char* key, const std::string& path) {
    require_object(j, path);
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing field");
    return *it;
}

const Json* optional_field(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return nullptr;
    return &*it;
}

std::string as_string(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::string get_string(const Json& j, const char* key, const std::string& path) {
    return as_string(field(j, key, path), path + "." + key);
}

std::string opt_string(const Json& j, const char* key, const std::string& path) {
    const Json* v = optional_field(j, key);
    return v ? as_string(*v, path + "." + key) : std::string{};
}

std::int64_t as_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<std::int64_t>();
}

int as_score(const Json& j, const std::string& path) {
    const auto v = as_int(j, path);
    if (v < -1000 || v > 1000) fail(path, "score out of range");
    return static_cast<int>(v);
}

bool as_bool(const Json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

const Json& as_array(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

std::vector<std::string> string_list(const Json& j, const char* key, const std::string& path) {
    std::vector<std::string> out;
    const Json* v = optional_field(j, key);
    if (v == nullptr) return out;
    const std::string p = path + "." + key;
    as_array(*v, p);
    for (std::size_t i = 0; i < v->size(); ++i) {
        out.push_back(as_string((*v)[i], p + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Rational as_rational(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return Rational{j.get<std::int64_t>()};
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const Error& e) {
            fail(path, e.what());
        }
    }
    fail(path, "expected a rational (integer or string such as \"6.75\" or \"1/3\")");
}

template <typename F>
auto parse_enum_field(const Json& j, const std::string& path, F&& parser) {
    const std::string text = as_string(j, path);
    try {
        return parser(text);
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

void check_header(const Json& j, std::string_view expected_kind, const std::string& path) {
    require_object(j, path);
    if (const Json* k = optional_field(j, "kind")) {
        const std::string kind = as_string(*k, path + ".kind");
        if (kind != expected_kind) {
            fail(path + ".kind", "expected kind '" + std::string(expected_kind) + "', got '" + kind + "'");
        }
    }
    if (const Json* v = optional_field(j, "format_version")) {
        const auto version = as_int(*v, path + ".format_version");
        if (version != kFormatVersion) {
            fail(path + ".format_version", "unsupported format_version " + std::to_string(version));
        }
    }
}

Json header(std::string_view kind) {
    return Json{{"kind", kind}, {"format_version", kFormatVersion}};
}

FactorAssignment assignment_from(const Json& j, const std::string& path) {
    require_object(j, path);
    FactorAssignment a;
    a.factor_id = get_string(j, "factor", path);
    a.score = as_score(field(j, "score", path), path + ".score");
    if (const Json* label = optional_field(j, "anchor_label")) {
        a.anchor_label = as_string(*label, path + ".anchor_label");
    }
    a.rationale = opt_string(j, "rationale", path);
    return a;
}

std::vector<FactorAssignment> assignment_list(const Json& j, const std::string& path) {
    std::vector<FactorAssignment> out;
    as_array(j, path);
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(assignment_from(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Json assignment_array(const std::vector<FactorAssignment>& v) {
    Json out = Json::array();
    for (const auto& a : v) out.push_back(to_json(a));
    return out;
}

rating::Thresholds thresholds_from(const Json& j, const std::string& path) {
    as_array(j, path);
    if (j.size() != 2) fail(path, "expected exactly two thresholds");
    return {as_rational(j[0], path + "[0]"), as_rational(j[1], path + "[1]")};
}

Json thresholds_json(const rating::Thresholds& t) {
    return Json::array({t.medium_from.to_string(), t.high_from.to_string()});
}

}  // namespace

// --- rating ---------------------------------------------------------------

Json to_json(const rating::RatingScheme& scheme) {
    Json j = header(kind::kScheme);
    j["id"] = scheme.id;
    Json factors = Json::array();
    for (const auto& f : scheme.factors) {
        Json anchors = Json::array();
        for (const auto& a : f.anchors) anchors.push_back({{"value", a.value}, {"label", a.label}});
        factors.push_back({{"id", f.id},
                           {"display_name", f.display_name},
                           {"category", rating::to_string(f.category)},
                           {"weight", f.weight.to_string()},
                           {"anchors", anchors}});
    }
    j["factors"] = factors;
    j["likelihood_thresholds"] = thresholds_json(scheme.likelihood_thresholds);
    j["impact_thresholds"] = thresholds_json(scheme.impact_thresholds);
    Json chart = Json::object();
    for (std::size_t row = 0; row < 3; ++row) {
        Json cols = Json::object();
        for (std::size_t col = 0; col < 3; ++col) {
            if (const auto& cell = scheme.severity_chart[row][col]) {
                cols[std::string(rating::to_string(rating::kAllLevels[col]))] = rating::to_string(*cell);
            }
        }
        chart[std::string(rating::to_string(rating::kAllLevels[row]))] = cols;
    }
    j["severity_chart"] = chart;
    j["impact_mode"] = rating::to_string(scheme.impact_mode);
    return j;
}

rating::RatingScheme scheme_from_json(const Json& j) {
    const std::string path = "scheme";
    check_header(j, kind::kScheme, path);
    rating::RatingScheme s;
    s.id = get_string(j, "id", path);
    const Json& factors = as_array(field(j, "factors", path), path + ".factors");
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const std::string fp = path + ".factors[" + std::to_string(i) + "]";
        const Json& fj = factors[i];
        require_object(fj, fp);
        rating::FactorDefinition f;
        f.id = get_string(fj, "id", fp);
        f.display_name = opt_string(fj, "display_name", fp);
        f.category = parse_enum_field(field(fj, "category", fp), fp + ".category", rating::parse_category);
        if (const Json* w = optional_field(fj, "weight")) f.weight = as_rational(*w, fp + ".weight");
        if (const Json* anchors = optional_field(fj, "anchors")) {
            as_array(*anchors, fp + ".anchors");
            for (std::size_t k = 0; k < anchors->size(); ++k) {
                const std::string ap = fp + ".anchors[" + std::to_string(k) + "]";
                const Json& aj = (*anchors)[k];
                f.anchors.push_back({as_score(field(aj, "value", ap), ap + ".value"), get_string(aj, "label", ap)});
            }
        }
        s.factors.push_back(std::move(f));
    }
    s.likelihood_thresholds = thresholds_from(field(j, "likelihood_thresholds", path), path + ".likelihood_thresholds");
    s.impact_thresholds = thresholds_from(field(j, "impact_thresholds", path), path + ".impact_thresholds");
    const Json& chart = field(j, "severity_chart", path);
    require_object(chart, path + ".severity_chart");
    for (const auto& [row_key, cols] : chart.items()) {
        const std::string rp = path + ".severity_chart." + row_key;
        const auto row = static_cast<std::size_t>(parse_enum_field(Json(row_key), rp, rating::parse_level));
        require_object(cols, rp);
        for (const auto& [col_key, cell] : cols.items()) {
            const std::string cp = rp + "." + col_key;
            const auto col = static_cast<std::size_t>(parse_enum_field(Json(col_key), cp, rating::parse_level));
            s.severity_chart[row][col] = parse_enum_field(cell, cp, rating::parse_severity);
        }
    }
    if (const Json* mode = optional_field(j, "impact_mode")) {
        s.impact_mode = parse_enum_field(*mode, path + ".impact_mode", rating::parse_impact_mode);
    }
    return s;
}

Json to_json(const FactorAssignment& a) {
    Json j{{"factor", a.factor_id}, {"score", a.score}, {"rationale", a.rationale}};
    if (a.anchor_label) j["anchor_label"] = *a.anchor_label;
    return j;
}

std::vector<FactorAssignment> assignments_from_json(const Json& j) {
    const std::string path = "assignments";
    if (j.is_object()) {
        std::vector<FactorAssignment> out;
        for (const auto& [key, value] : j.items()) {
            out.push_back({key, as_score(value, path + "." + key), std::nullopt, {}});
        }
        return out;
    }
    return assignment_list(j, path);
}

Json to_json(const rating::RiskRating& r) {
    return {{"likelihood_score", r.likelihood_score.to_string()},
            {"technical_impact_score", r.technical_impact_score.to_string()},
            {"business_impact_score", r.business_impact_score.to_string()},
            {"final_impact_score", r.final_impact_score.to_string()},
            {"likelihood_level", rating::to_string(r.likelihood_level)},
            {"impact_level", rating::to_string(r.impact_level)},
            {"severity", rating::to_string(r.severity)}};
}

rating::RiskRating rating_from_json(const Json& j) {
    const std::string path = "rating";
    require_object(j, path);
    rating::RiskRating r;
    r.likelihood_score = as_rational(field(j, "likelihood_score", path), path + ".likelihood_score");
    r.technical_impact_score = as_rational(field(j, "technical_impact_score", path), path + ".technical_impact_score");
    r.business_impact_score = as_rational(field(j, "business_impact_score", path), path + ".business_impact_score");
    r.final_impact_score = as_rational(field(j, "final_impact_score", path), path + ".final_impact_score");
    r.likelihood_level = parse_enum_field(field(j, "likelihood_level", path), path, rating::parse_level);
    r.impact_level = parse_enum_field(field(j, "impact_level", path), path, rating::parse_level);
    r.severity = parse_enum_field(field(j, "severity", path), path, rating::parse_severity);
    return r;
}

Json to_json(const rating::ValidationReport& r) {
    Json issues = Json::array();
    for (const auto& i : r.issues) {
        issues.push_back({{"severity", i.kind == rating::ValidationIssue::Kind::Error ? "error" : "warning"},
                          {"code", i.code},
                          {"message", i.message},
                          {"locus", i.locus}});
    }
    return {{"ok", r.ok()},
            {"errors", r.error_count()},
            {"warnings", r.warning_count()},
            {"issues", issues}};
}

// --- catalog --------------------------------------------------------------

Json to_json(const catalog::ThreatEntry& e) {
    Json groups = Json::array();
    for (auto g : e.stakeholders) groups.push_back(catalog::to_string(g));
    return {{"id", e.id},
            {"name", e.name},
            {"causes", e.causes},
            {"consequences", e.consequences},
            {"static_controls", e.static_controls},
            {"dynamic_controls", e.dynamic_controls},
            {"traditional_cybersec", e.traditional_cybersec},
            {"stakeholders", groups}};
}

namespace {

catalog::ThreatEntry threat_at(const Json& j, const std::string& path) {
    require_object(j, path);
    catalog::ThreatEntry e;
    e.id = get_string(j, "id", path);
    e.name = get_string(j, "name", path);
    e.causes = string_list(j, "causes", path);
    e.consequences = string_list(j, "consequences", path);
    e.static_controls = string_list(j, "static_controls", path);
    e.dynamic_controls = string_list(j, "dynamic_controls", path);
    if (const Json* t = optional_field(j, "traditional_cybersec")) {
        e.traditional_cybersec = as_bool(*t, path + ".traditional_cybersec");
    }
    for (const auto& name : string_list(j, "stakeholders", path)) {
        e.stakeholders.push_back(parse_enum_field(Json(name), path + ".stakeholders", catalog::parse_stakeholder));
    }
    return e;
}

}  // namespace

catalog::ThreatEntry threat_from_json(const Json& j) { return threat_at(j, "threat"); }

Json to_json(const catalog::Catalog& c) {
    Json j = header(kind::kCatalog);
    j["version"] = c.version;
    Json entries = Json::array();
    for (const auto& e : c.entries) entries.push_back(to_json(e));
    j["entries"] = entries;
    return j;
}

catalog::Catalog catalog_from_json(const Json& j) {
    const std::string path = "catalog";
    check_header(j, kind::kCatalog, path);
    catalog::Catalog c;
    c.version = opt_string(j, "version", path);
    if (const Json* entries = optional_field(j, "entries")) {
        as_array(*entries, path + ".entries");
        for (std::size_t i = 0; i < entries->size(); ++i) {
            c.entries.push_back(threat_at((*entries)[i], path + ".entries[" + std::to_string(i) + "]"));
        }
    }
    return c;
}

// --- assessment -----------------------------------------------------------

Json to_json(const ControlAdjustment& a) {
    Json j = header(kind::kAdjustment);
    j["label"] = a.label;
    j["overrides"] = Json::object();
    for (const auto& [id, score] : a.overrides) j["overrides"][id] = score;
    j["note"] = a.note;
    return j;
}

namespace {

ControlAdjustment adjustment_at(const Json& j, const std::string& path) {
    check_header(j, kind::kAdjustment, path);
    ControlAdjustment a;
    a.label = opt_string(j, "label", path);
    a.note = opt_string(j, "note", path);
    if (const Json* overrides = optional_field(j, "overrides")) {
        require_object(*overrides, path + ".overrides");
        for (const auto& [id, score] : overrides->items()) {
            a.overrides[id] = as_score(score, path + ".overrides." + id);
        }
    }
    return a;
}

}  // namespace

ControlAdjustment adjustment_from_json(const Json& j) { return adjustment_at(j, "adjustment"); }

Json to_json(const AssessmentDocument& d) {
    Json j = header(kind::kAssessment);
    j["id"] = d.id;
    j["threat"] = d.threat;
    j["system_context"] = d.system_context;
    j["stakeholder"] = catalog::to_string(d.stakeholder);
    j["status"] = assessment::to_string(d.status);
    j["scheme"] = d.scheme;
    j["revision"] = d.revision;
    if (d.scenario) {
        j["scenario"] = {{"threat_agent", d.scenario->threat_agent},
                         {"method", d.scenario->method},
                         {"assignments", assignment_array(d.scenario->assignments)}};
    }
    if (d.dependencies) {
        Json components = Json::array();
        for (const auto& c : d.dependencies->components) {
            components.push_back({{"name", c.name}, {"weakness", c.weakness}});
        }
        j["dependencies"] = {{"components", components},
                             {"assignments", assignment_array(d.dependencies->assignments)}};
    }
    if (d.impact) {
        j["impact"] = {{"technical", assignment_array(d.impact->technical)},
                       {"business", assignment_array(d.impact->business)}};
    }
    Json adjustments = Json::array();
    for (const auto& a : d.treatment.adjustments) {
        Json aj = to_json(a);
        aj.erase("kind");
        aj.erase("format_version");
        adjustments.push_back(aj);
    }
    j["treatment"] = {{"disposition", d.treatment.disposition},
                      {"acceptance_note", d.treatment.acceptance_note},
                      {"adjustments", adjustments}};
    j["review_notes"] = d.review_notes;
    if (d.derived_from) {
        j["derived_from"] = {{"source_id", d.derived_from->source_id},
                             {"source_revision", d.derived_from->source_revision},
                             {"adjustment_label", d.derived_from->adjustment_label}};
    }
    return j;
}

AssessmentDocument assessment_from_json(const Json& j) {
    const std::string path = "assessment";
    check_header(j, kind::kAssessment, path);
    AssessmentDocument d;
    d.id = get_string(j, "id", path);
    d.threat = get_string(j, "threat", path);
    d.system_context = opt_string(j, "system_context", path);
    if (const Json* s = optional_field(j, "stakeholder")) {
        d.stakeholder = parse_enum_field(*s, path + ".stakeholder", catalog::parse_stakeholder);
    }
    if (const Json* s = optional_field(j, "status")) {
        d.status = parse_enum_field(*s, path + ".status", assessment::parse_status);
    }
    if (const Json* s = optional_field(j, "scheme")) d.scheme = as_string(*s, path + ".scheme");
    if (const Json* r = optional_field(j, "revision")) {
        const auto rev = as_int(*r, path + ".revision");
        if (rev < 0) fail(path + ".revision", "revision must be non-negative");
        d.revision = static_cast<std::uint64_t>(rev);
    }
    if (const Json* s = optional_field(j, "scenario")) {
        const std::string sp = path + ".scenario";
        require_object(*s, sp);
        assessment::ScenarioAnalysis sc;
        sc.threat_agent = opt_string(*s, "threat_agent", sp);
        sc.method = opt_string(*s, "method", sp);
        if (const Json* a = optional_field(*s, "assignments")) sc.assignments = assignment_list(*a, sp + ".assignments");
        d.scenario = std::move(sc);
    }
    if (const Json* dep = optional_field(j, "dependencies")) {
        const std::string dp = path + ".dependencies";
        require_object(*dep, dp);
        assessment::DependencyMapping dm;
        if (const Json* comps = optional_field(*dep, "components")) {
            as_array(*comps, dp + ".components");
            for (std::size_t i = 0; i < comps->size(); ++i) {
                const std::string cp = dp + ".components[" + std::to_string(i) + "]";
                dm.components.push_back({get_string((*comps)[i], "name", cp), opt_string((*comps)[i], "weakness", cp)});
            }
        }
        if (const Json* a = optional_field(*dep, "assignments")) dm.assignments = assignment_list(*a, dp + ".assignments");
        d.dependencies = std::move(dm);
    }
    if (const Json* imp = optional_field(j, "impact")) {
        const std::string ip = path + ".impact";
        require_object(*imp, ip);
        assessment::ImpactAnalysis ia;
        if (const Json* t = optional_field(*imp, "technical")) ia.technical = assignment_list(*t, ip + ".technical");
        if (const Json* b = optional_field(*imp, "business")) ia.business = assignment_list(*b, ip + ".business");
        d.impact = std::move(ia);
    }
    if (const Json* t = optional_field(j, "treatment")) {
        const std::string tp = path + ".treatment";
        require_object(*t, tp);
        d.treatment.disposition = opt_string(*t, "disposition", tp);
        d.treatment.acceptance_note = opt_string(*t, "acceptance_note", tp);
        if (const Json* adjs = optional_field(*t, "adjustments")) {
            as_array(*adjs, tp + ".adjustments");
            for (std::size_t i = 0; i < adjs->size(); ++i) {
                d.treatment.adjustments.push_back(
                    adjustment_at((*adjs)[i], tp + ".adjustments[" + std::to_string(i) + "]"));
            }
        }
    }
    d.review_notes = string_list(j, "review_notes", path);
    if (const Json* df = optional_field(j, "derived_from")) {
        const std::string dp = path + ".derived_from";
        assessment::Derivation derivation;
        derivation.source_id = get_string(*df, "source_id", dp);
        const auto rev = as_int(field(*df, "source_revision", dp), dp + ".source_revision");
        if (rev < 0) fail(dp + ".source_revision", "revision must be non-negative");
        derivation.source_revision = static_cast<std::uint64_t>(rev);
        derivation.adjustment_label = opt_string(*df, "adjustment_label", dp);
        d.derived_from = std::move(derivation);
    }
    return d;
}

// --- matrix ---------------------------------------------------------------

Json to_json(const matrix::ThreatMatrix& m) {
    Json j = header(kind::kMatrix);
    j["scheme"] = m.scheme_id;
    j["catalog_version"] = m.catalog_version;
    if (m.generated_at) j["generated_at"] = *m.generated_at;
    j["stakeholder_filter"] = m.stakeholder_filter ? Json(catalog::to_string(*m.stakeholder_filter)) : Json(nullptr);
    Json rows = Json::array();
    for (const auto& row : m.rows) {
        rows.push_back({{"threat", to_json(row.threat)},
                        {"rating", row.rating ? to_json(*row.rating) : Json(nullptr)},
                        {"assessment_ref", row.assessment_ref ? Json(*row.assessment_ref) : Json(nullptr)}});
    }
    j["rows"] = rows;
    return j;
}

matrix::ThreatMatrix matrix_from_json(const Json& j) {
    const std::string path = "matrix";
    check_header(j, kind::kMatrix, path);
    matrix::ThreatMatrix m;
    m.scheme_id = opt_string(j, "scheme", path);
    m.catalog_version = opt_string(j, "catalog_version", path);
    if (const Json* g = optional_field(j, "generated_at")) m.generated_at = as_string(*g, path + ".generated_at");
    if (const Json* f = optional_field(j, "stakeholder_filter")) {
        m.stakeholder_filter = parse_enum_field(*f, path + ".stakeholder_filter", catalog::parse_stakeholder);
    }
    const Json& rows = as_array(field(j, "rows", path), path + ".rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string rp = path + ".rows[" + std::to_string(i) + "]";
        matrix::MatrixRow row;
        row.threat = threat_at(field(rows[i], "threat", rp), rp + ".threat");
        if (const Json* r = optional_field(rows[i], "rating")) row.rating = rating_from_json(*r);
        if (const Json* a = optional_field(rows[i], "assessment_ref")) {
            row.assessment_ref = as_string(*a, rp + ".assessment_ref");
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

Json to_json(const Error& e) {
    Json j{{"code", error_code_name(e.code())}, {"message", e.what()}, {"locus", e.locus()}};
    if (const auto* incomplete = dynamic_cast<const IncompleteFactorsError*>(&e)) {
        j["missing"] = incomplete->missing();
    }
    return j;
}

}  // namespace llmrisk::codec
