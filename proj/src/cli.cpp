#include "llmrisk/cli.hpp"

#include "llmrisk/api_server.hpp"
#include "llmrisk/assessment.hpp"
#include "llmrisk/catalog.hpp"
#include "llmrisk/codec.hpp"
#include "llmrisk/document_store.hpp"
#include "llmrisk/matrix.hpp"
#include "llmrisk/rating.hpp"

#include <CLI11.hpp>

#include <pthread.h>
#include <signal.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace llmrisk::cli {

namespace fs = std::filesystem;
using assessment::AssessmentDocument;
using rating::Category;
using rating::RatingScheme;

namespace {

struct Options {
    std::string scheme_path;
    std::string catalog_path;
    bool no_color = false;
    std::string format = "text";
    std::string out_path;

    std::string target;       // validate / evaluate / whatif path, matrix dir
    std::string adjust_path;  // whatif
    std::string stakeholder;
    std::string traditional;  // "", "true", "false"
    bool stamp = false;

    std::string addr = "127.0.0.1";
    int port = 8080;
    std::string store_root = "assessments";
    std::string static_dir;
};

// Accepts "fixtures/prompt_injection" for "fixtures/prompt_injection.json".
fs::path resolve_input(const std::string& path) {
    std::error_code ec;
    if (fs::exists(path, ec)) return path;
    if (fs::path candidate = path + ".json"; fs::exists(candidate, ec)) return candidate;
    throw Error(ErrorCode::Io, "no such file: '" + path + "'", path);
}

RatingScheme load_scheme(const Options& opts) {
    if (opts.scheme_path.empty()) return rating::default_scheme();
    RatingScheme scheme = codec::scheme_from_json(codec::read_json_file(resolve_input(opts.scheme_path)));
    const auto report = rating::validate_scheme(scheme);
    if (!report.ok()) {
        throw Error(ErrorCode::Validation, "scheme '" + opts.scheme_path + "' is invalid: " + report.issues.front().message,
                    opts.scheme_path);
    }
    return scheme;
}

catalog::Catalog load_catalog(const Options& opts) {
    if (opts.catalog_path.empty()) return catalog::bundled_catalog();
    return catalog::load_catalog(resolve_input(opts.catalog_path));
}

AssessmentDocument load_document(const std::string& path) {
    return codec::assessment_from_json(codec::read_json_file(resolve_input(path)));
}

std::optional<catalog::StakeholderGroup> parse_stakeholder_flag(const std::string& value) {
    if (value.empty() || value == "all") return std::nullopt;
    try {
        return catalog::parse_stakeholder(value);
    } catch (const Error& e) {
        throw Error(ErrorCode::Usage, e.what(), value);
    }
}

bool want_json(const Options& opts) {
    if (opts.format == "json") return true;
    if (opts.format == "text") return false;
    throw Error(ErrorCode::Usage, "unknown format '" + opts.format + "' (expected text or json)");
}

void write_output(const Options& opts, const std::string& bytes, std::ostream& out) {
    if (opts.out_path.empty()) {
        out << bytes;
        return;
    }
    std::ofstream file(opts.out_path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << bytes) || !file.flush()) {
        throw Error(ErrorCode::Io, "cannot write '" + opts.out_path + "'", opts.out_path);
    }
}

class Painter {
public:
    explicit Painter(bool enabled) : enabled_(enabled) {}

    std::string severity(rating::Severity s) const {
        const std::string text(rating::to_string(s));
        if (!enabled_) return text;
        const char* code = "";
        switch (s) {
            case rating::Severity::Note: code = "\033[90m"; break;
            case rating::Severity::Low: code = "\033[32m"; break;
            case rating::Severity::Medium: code = "\033[33m"; break;
            case rating::Severity::High: code = "\033[31m"; break;
            case rating::Severity::Critical: code = "\033[1;31m"; break;
        }
        return code + text + "\033[0m";
    }

private:
    bool enabled_;
};

// --- validate --------------------------------------------------------------

void print_report(const rating::ValidationReport& report, const std::string& subject, std::ostream& out) {
    for (const auto& issue : report.issues) {
        out << (issue.kind == rating::ValidationIssue::Kind::Error ? "error" : "warning") << ": [" << issue.code << "] "
            << issue.message;
        if (!issue.locus.empty()) out << " (" << issue.locus << ")";
        out << '\n';
    }
    out << subject << ": " << report.error_count() << " error(s), " << report.warning_count() << " warning(s)\n";
}

int cmd_validate(const Options& opts, std::ostream& out) {
    const fs::path path = resolve_input(opts.target);
    const bool json = want_json(opts);
    rating::ValidationReport report;
    std::string kind;
    try {
        const codec::Json doc = codec::read_json_file(path);
        kind = codec::kind_of(doc);
        if (kind == codec::kind::kAssessment) {
            report = assessment::validate_document(codec::assessment_from_json(doc), load_catalog(opts), load_scheme(opts));
        } else if (kind == codec::kind::kScheme) {
            report = rating::validate_scheme(codec::scheme_from_json(doc));
        } else if (kind == codec::kind::kCatalog) {
            auto cat = codec::catalog_from_json(doc);
            cat.source = path.string();
            catalog::check_catalog(cat);
        } else if (kind == codec::kind::kAdjustment) {
            assessment::check_adjustment(codec::adjustment_from_json(doc), load_scheme(opts));
        } else {
            report.error("unknown_kind", "document kind '" + kind + "' is not one of assessment, rating_scheme, "
                                         "catalog, control_adjustment", path.string());
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Io || e.code() == ErrorCode::Usage) throw;
        report.error(std::string(error_code_name(e.code())), e.what(), e.locus());
    }

    if (json) {
        codec::Json j = codec::to_json(report);
        j["path"] = path.string();
        j["kind"] = kind;
        out << codec::dump(j);
    } else {
        print_report(report, path.string(), out);
    }
    return report.ok() ? kExitOk : kExitFailed;
}

// --- evaluate --------------------------------------------------------------

std::string pad(std::string_view text, std::size_t width) {
    std::string s(text);
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

void print_factor_group(const AssessmentDocument& doc, const RatingScheme& scheme, Category category,
                        std::string_view title, std::ostream& out) {
    out << title << '\n';
    const auto assignments = doc.assignments();
    for (const auto* factor : scheme.factors_in(category)) {
        auto it = std::find_if(assignments.begin(), assignments.end(),
                               [&](const auto& a) { return a.factor_id == factor->id; });
        out << "  " << pad(factor->display_name.empty() ? factor->id : factor->display_name, 26);
        if (it == assignments.end()) {
            out << "-\n";
            continue;
        }
        out << it->score;
        std::string label;
        if (it->anchor_label) {
            label = *it->anchor_label;
        } else if (auto anchor = factor->anchor_label(it->score)) {
            label = *anchor;
        }
        if (!label.empty()) out << " - " << label;
        out << '\n';
    }
}

void print_line(std::string_view label, const std::string& value, std::ostream& out) {
    out << "  " << pad(label, 26) << value << '\n';
}

int cmd_evaluate(const Options& opts, std::ostream& out, bool color) {
    const bool json = want_json(opts);
    const RatingScheme scheme = load_scheme(opts);
    const AssessmentDocument doc = load_document(opts.target);
    const rating::RiskRating r = assessment::evaluate_document(doc, scheme);

    if (json) {
        codec::Json j = codec::to_json(r);
        j["id"] = doc.id;
        j["threat"] = doc.threat;
        j["scheme"] = scheme.id;
        out << codec::dump(j);
        return kExitOk;
    }

    const Painter paint(color && !opts.no_color);
    const auto cat = load_catalog(opts);
    const auto* entry = cat.find(doc.threat);
    out << "Assessment: " << doc.id << " (" << doc.threat;
    if (entry != nullptr && entry->id == doc.threat) out << " " << entry->name;
    out << ")\nScheme:     " << scheme.id << "\n\n";

    print_factor_group(doc, scheme, Category::ThreatAgent, "Threat Agent Factors", out);
    print_factor_group(doc, scheme, Category::Vulnerability, "Vulnerability Factors", out);
    print_line("Likelihood Score:", r.likelihood_score.to_display(), out);
    print_line("Likelihood:", std::string(rating::display_name(r.likelihood_level)), out);
    out << '\n';
    print_factor_group(doc, scheme, Category::TechnicalImpact, "Technical Impact Factors", out);
    print_line("Technical Impact Score:", r.technical_impact_score.to_display(), out);
    print_factor_group(doc, scheme, Category::BusinessImpact, "Business Impact Factors", out);
    print_line("Business Impact Score:", r.business_impact_score.to_display(), out);
    out << '\n';
    print_line("Final Impact Score:", r.final_impact_score.to_display(), out);
    print_line("Impact:", std::string(rating::display_name(r.impact_level)), out);
    out << '\n';
    print_line("Risk Severity:", paint.severity(r.severity), out);
    return kExitOk;
}

// --- whatif ----------------------------------------------------------------

int cmd_whatif(const Options& opts, std::ostream& out, bool color) {
    const bool json = want_json(opts);
    const RatingScheme scheme = load_scheme(opts);
    const AssessmentDocument doc = load_document(opts.target);
    const auto adjustment = codec::adjustment_from_json(codec::read_json_file(resolve_input(opts.adjust_path)));
    const auto outcome = assessment::apply_adjustment(doc, adjustment, scheme);

    if (json) {
        codec::Json changed = codec::Json::object();
        const auto original = doc.assignments();
        for (const auto& [factor_id, score] : adjustment.overrides) {
            auto it = std::find_if(original.begin(), original.end(),
                                   [&](const auto& a) { return a.factor_id == factor_id; });
            changed[factor_id] = {{"from", it == original.end() ? codec::Json(nullptr) : codec::Json(it->score)},
                                  {"to", score}};
        }
        out << codec::dump({{"id", doc.id},
                            {"label", adjustment.label},
                            {"overrides", changed},
                            {"before", codec::to_json(outcome.before)},
                            {"after", codec::to_json(outcome.after)}});
        return kExitOk;
    }

    const Painter paint(color && !opts.no_color);
    const auto& b = outcome.before;
    const auto& a = outcome.after;
    out << "What-if: " << (adjustment.label.empty() ? "(unlabelled)" : adjustment.label) << " on " << doc.id << "\n\n";
    out << "  " << pad("", 26) << pad("Before", 10) << "After\n";
    auto row = [&](std::string_view label, const std::string& before, const std::string& after) {
        out << "  " << pad(label, 26) << pad(before, 10) << after << '\n';
    };
    row("Likelihood score", b.likelihood_score.to_display(), a.likelihood_score.to_display());
    row("Likelihood", std::string(rating::display_name(b.likelihood_level)),
        std::string(rating::display_name(a.likelihood_level)));
    row("Technical impact score", b.technical_impact_score.to_display(), a.technical_impact_score.to_display());
    row("Business impact score", b.business_impact_score.to_display(), a.business_impact_score.to_display());
    row("Final impact score", b.final_impact_score.to_display(), a.final_impact_score.to_display());
    row("Impact", std::string(rating::display_name(b.impact_level)), std::string(rating::display_name(a.impact_level)));
    // Pad on the plain text so escape codes do not skew the column.
    out << "  " << pad("Risk severity", 26) << paint.severity(b.severity)
        << std::string(10 - rating::to_string(b.severity).size(), ' ') << paint.severity(a.severity) << '\n';
    return kExitOk;
}

// --- matrix ----------------------------------------------------------------

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

int cmd_matrix(const Options& opts, std::ostream& out) {
    const auto format = matrix::parse_format(opts.format == "text" ? "csv" : opts.format);
    const auto group = parse_stakeholder_flag(opts.stakeholder);
    const RatingScheme scheme = load_scheme(opts);
    const auto cat = load_catalog(opts);
    const auto docs = store::read_directory(opts.target);
    for (const auto& doc : docs) {
        const auto report = assessment::validate_document(doc, cat, scheme);
        if (!report.ok()) {
            const auto& issue = *std::find_if(report.issues.begin(), report.issues.end(), [](const auto& i) {
                return i.kind == rating::ValidationIssue::Kind::Error;
            });
            throw Error(ErrorCode::Validation, "assessment '" + doc.id + "': " + issue.message, doc.id);
        }
    }
    auto m = matrix::build_matrix(cat, docs, scheme, group);
    if (opts.stamp) m.generated_at = utc_now();
    write_output(opts, matrix::render(m, format), out);
    return kExitOk;
}

// --- catalog / scheme ------------------------------------------------------

int cmd_catalog_list(const Options& opts, std::ostream& out) {
    const bool json = want_json(opts);
    catalog::Catalog view = load_catalog(opts);
    if (auto group = parse_stakeholder_flag(opts.stakeholder)) view.entries = catalog::filter_by_stakeholder(view, *group);
    if (!opts.traditional.empty()) view.entries = catalog::filter_traditional(view, opts.traditional == "true");

    if (json) {
        out << codec::dump(codec::to_json(view));
        return kExitOk;
    }
    for (const auto& e : view.entries) {
        out << pad(e.id, 7) << pad(e.name, 34) << pad(e.traditional_cybersec ? "traditional" : "llm-specific", 14);
        for (std::size_t i = 0; i < e.stakeholders.size(); ++i) {
            out << (i == 0 ? "" : ", ") << catalog::to_string(e.stakeholders[i]);
        }
        out << '\n';
    }
    out << view.entries.size() << " threat(s)\n";
    return kExitOk;
}

int cmd_catalog_export(const Options& opts, std::ostream& out) {
    write_output(opts, codec::dump(codec::to_json(load_catalog(opts))), out);
    return kExitOk;
}

int cmd_scheme_export(const Options& opts, std::ostream& out) {
    write_output(opts, codec::dump(codec::to_json(load_scheme(opts))), out);
    return kExitOk;
}

// --- serve -----------------------------------------------------------------

int cmd_serve(const Options& opts, std::ostream& err) {
    service::ServiceConfig config;
    config.host = opts.addr;
    config.port = opts.port;
    // "--addr host:port" is accepted as well as separate flags.
    if (auto colon = opts.addr.rfind(':'); colon != std::string::npos && opts.addr.find(']') == std::string::npos) {
        config.host = opts.addr.substr(0, colon);
        try {
            config.port = std::stoi(opts.addr.substr(colon + 1));
        } catch (const std::exception&) {
            throw Error(ErrorCode::Usage, "invalid --addr '" + opts.addr + "'");
        }
    }
    config.store_root = opts.store_root;
    config.scheme = load_scheme(opts);
    config.catalog = load_catalog(opts);
    if (!opts.static_dir.empty()) config.static_dir = opts.static_dir;

    service::ApiServer server(std::move(config));
    const int port = server.bind();
    err << "serving on http://" << (opts.addr.find(':') == std::string::npos ? opts.addr : opts.addr.substr(0, opts.addr.rfind(':')))
        << ":" << port << " (store: " << opts.store_root << ")" << std::endl;

    // SIGINT/SIGTERM are consumed by a waiter thread; server threads inherit the mask.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    sigaddset(&signals, SIGUSR1);
    sigset_t previous;
    pthread_sigmask(SIG_BLOCK, &signals, &previous);
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        if (sig != SIGUSR1) server.stop();
    });
    server.run();
    pthread_kill(waiter.native_handle(), SIGUSR1);
    waiter.join();
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    return kExitOk;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io: return kExitIo;
        case ErrorCode::Usage: return kExitUsage;
        default: return kExitFailed;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
    Options opts;
    CLI::App app{"Risk assessment toolkit for LLM-integrated systems (OWASP risk rating).", "llmrisk"};
    app.require_subcommand(1);
    app.add_option("--scheme", opts.scheme_path, "Rating scheme file (default: bundled OWASP scheme)")
        ->envname("LLMRISK_SCHEME");
    app.add_option("--catalog", opts.catalog_path, "Threat catalog file (default: bundled OWASP LLM Top 10)");
    app.add_flag("--no-color", opts.no_color, "Disable ANSI colors");

    auto* validate = app.add_subcommand("validate", "Validate an assessment, scheme, catalog or adjustment file");
    validate->add_option("path", opts.target, "Document to validate")->required();
    validate->add_option("--format", opts.format, "text or json");

    auto* evaluate = app.add_subcommand("evaluate", "Compute likelihood, impact and severity for an assessment");
    evaluate->add_option("doc", opts.target, "Assessment document")->required();
    evaluate->add_option("--format", opts.format, "text or json");

    auto* whatif = app.add_subcommand("whatif", "Compare ratings before and after a control adjustment");
    whatif->add_option("doc", opts.target, "Assessment document")->required();
    whatif->add_option("--adjust", opts.adjust_path, "Control adjustment file")->required();
    whatif->add_option("--format", opts.format, "text or json");

    auto* matrix_cmd = app.add_subcommand("matrix", "Build the threat matrix from a directory of assessments");
    matrix_cmd->add_option("dir", opts.target, "Assessments directory")->required();
    matrix_cmd->add_option("--stakeholder", opts.stakeholder,
                           "fine_tuning_developer, api_integration_developer or end_user");
    matrix_cmd->add_option("--format", opts.format, "csv, md or json (default csv)");
    matrix_cmd->add_option("--out", opts.out_path, "Write to a file instead of stdout");
    matrix_cmd->add_flag("--stamp", opts.stamp, "Record the generation time in json output");

    auto* catalog_cmd = app.add_subcommand("catalog", "Query or export the threat catalog");
    catalog_cmd->require_subcommand(1);
    auto* catalog_list = catalog_cmd->add_subcommand("list", "List threats");
    catalog_list->add_option("--stakeholder", opts.stakeholder, "Only threats concerning this group");
    catalog_list->add_option("--traditional", opts.traditional, "true or false")
        ->check(CLI::IsMember({"true", "false"}));
    catalog_list->add_option("--format", opts.format, "text or json");
    auto* catalog_export = catalog_cmd->add_subcommand("export", "Write the catalog document");
    catalog_export->add_option("--out", opts.out_path, "Write to a file instead of stdout");

    auto* scheme_cmd = app.add_subcommand("scheme", "Export the rating scheme");
    scheme_cmd->require_subcommand(1);
    auto* scheme_export = scheme_cmd->add_subcommand("export", "Write the scheme document");
    scheme_export->add_option("--out", opts.out_path, "Write to a file instead of stdout");

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--addr", opts.addr, "Listen address, host or host:port (default 127.0.0.1)");
    serve->add_option("--port", opts.port, "Listen port (default 8080)");
    serve->add_option("--store", opts.store_root, "Assessment store directory");
    serve->add_option("--static", opts.static_dir, "Directory of static assets served at /");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(opts, out);
        if (evaluate->parsed()) return cmd_evaluate(opts, out, color);
        if (whatif->parsed()) return cmd_whatif(opts, out, color);
        if (matrix_cmd->parsed()) return cmd_matrix(opts, out);
        if (catalog_list->parsed()) return cmd_catalog_list(opts, out);
        if (catalog_export->parsed()) return cmd_catalog_export(opts, out);
        if (scheme_export->parsed()) return cmd_scheme_export(opts, out);
        if (serve->parsed()) return cmd_serve(opts, err);
    } catch (const Error& e) {
        err << "llmrisk: " << error_code_name(e.code()) << ": " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "llmrisk: " << e.what() << '\n';
        return kExitFailed;
    }
    return kExitUsage;
}

}  // namespace llmrisk::cli
