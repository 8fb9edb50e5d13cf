#include "llmrisk/api_server.hpp"

#include "llmrisk/assessment.hpp"
#include "llmrisk/codec.hpp"
#include "llmrisk/matrix.hpp"

#include <httplib.h>

#include <cctype>

namespace llmrisk::service {

using codec::Json;

int http_status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Validation:
        case ErrorCode::IncompleteFactors:
        case ErrorCode::Domain:
        case ErrorCode::Parse:
        case ErrorCode::Usage:
            return 400;
        case ErrorCode::NotFound:
            return 404;
        case ErrorCode::VersionConflict:
            return 409;
        case ErrorCode::Guard:
        case ErrorCode::Sequencing:
        case ErrorCode::Ambiguity:
        case ErrorCode::Join:
            return 422;
        case ErrorCode::Io:
            return 500;
    }
    return 500;
}

namespace {

constexpr const char* kJsonType = "application/json";

void send_json(httplib::Response& res, const Json& body, int status = 200) {
    res.status = status;
    res.set_content(codec::dump(body), kJsonType);
}

void send_error(httplib::Response& res, const Error& e) { send_json(res, codec::to_json(e), http_status_for(e.code())); }

// Runs a handler body, translating every failure into an ApiError response.
template <typename F>
void guarded(httplib::Response& res, F&& body) {
    try {
        body();
    } catch (const Error& e) {
        send_error(res, e);
    } catch (const Json::exception& e) {
        send_error(res, Error(ErrorCode::Parse, e.what()));
    } catch (const std::exception& e) {
        send_json(res, {{"code", "internal"}, {"message", e.what()}, {"locus", ""}}, 500);
    }
}

// Rejects documents whose validation report has errors, listing all issues.
void require_valid(const rating::ValidationReport& report, const std::string& locus) {
    if (report.ok()) return;
    for (const auto& issue : report.issues) {
        if (issue.kind == rating::ValidationIssue::Kind::Error) {
            throw Error(issue.code == "incomplete_factors" ? ErrorCode::IncompleteFactors : ErrorCode::Validation,
                        issue.message, issue.locus.empty() ? locus : issue.locus);
        }
    }
}

std::optional<catalog::StakeholderGroup> stakeholder_param(const httplib::Request& req) {
    if (!req.has_param("stakeholder")) return std::nullopt;
    const std::string value = req.get_param_value("stakeholder");
    if (value.empty() || value == "all") return std::nullopt;
    return catalog::parse_stakeholder(value);
}

// Expected revision for a PUT: "If-Match: *" disables the check, a numeric
// If-Match wins over the body's "revision" field.
std::optional<std::uint64_t> expected_revision(const httplib::Request& req, const assessment::AssessmentDocument& doc) {
    if (!req.has_header("If-Match")) return doc.revision;
    std::string value = req.get_header_value("If-Match");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (value == "*") return std::nullopt;
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(ErrorCode::Usage, "If-Match must be a revision number or *");
    }
    return std::stoull(value);
}

std::string generate_id(const store::DocumentStore& store, const std::string& threat) {
    std::string base;
    for (char ch : threat) {
        base += std::isalnum(static_cast<unsigned char>(ch)) ? static_cast<char>(std::tolower(ch)) : '_';
    }
    if (base.empty()) base = "assessment";
    for (int n = 1;; ++n) {
        std::string candidate = base + "-" + std::to_string(n);
        if (!store.contains(candidate)) return candidate;
    }
}

}  // namespace

ApiServer::ApiServer(ServiceConfig config)
    : config_(std::move(config)),
      store_(std::make_unique<store::DocumentStore>(config_.store_root)),
      server_(std::make_unique<httplib::Server>()) {
    const auto report = rating::validate_scheme(config_.scheme);
    if (!report.ok()) {
        throw Error(ErrorCode::Validation, "scheme '" + config_.scheme.id + "' is invalid: " + report.issues.front().message,
                    config_.scheme.id);
    }
    catalog::check_catalog(config_.catalog);
    install_routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind() {
    if (config_.port == 0) {
        const int port = server_->bind_to_any_port(config_.host);
        if (port < 0) throw Error(ErrorCode::Io, "cannot bind " + config_.host);
        config_.port = port;
        return port;
    }
    if (!server_->bind_to_port(config_.host, config_.port)) {
        throw Error(ErrorCode::Io, "cannot bind " + config_.host + ":" + std::to_string(config_.port));
    }
    return config_.port;
}

void ApiServer::run() { server_->listen_after_bind(); }

void ApiServer::stop() {
    if (server_) server_->stop();
}

void ApiServer::install_routes() {
    auto& srv = *server_;
    const auto& scheme = config_.scheme;
    const auto& cat = config_.catalog;
    auto& docs = *store_;

    if (config_.static_dir) {
        srv.set_mount_point("/", config_.static_dir->string());
    }

    srv.Get("/catalog", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            catalog::Catalog view = cat;
            if (auto group = stakeholder_param(req)) view.entries = catalog::filter_by_stakeholder(cat, *group);
            if (req.has_param("traditional")) {
                const std::string flag = req.get_param_value("traditional");
                if (flag != "true" && flag != "false") throw Error(ErrorCode::Usage, "traditional must be true|false");
                view.entries = catalog::filter_traditional(view, flag == "true");
            }
            send_json(res, codec::to_json(view));
        });
    });

    srv.Get("/catalog/:id", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const std::string id = req.path_params.at("id");
            const auto* entry = cat.find(id);
            if (entry == nullptr) throw Error(ErrorCode::NotFound, "no threat '" + id + "'", id);
            send_json(res, codec::to_json(*entry));
        });
    });

    srv.Get("/scheme", [&](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { send_json(res, codec::to_json(scheme)); });
    });

    srv.Get("/assessments", [&](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] {
            Json items = Json::array();
            for (const auto& e : docs.list()) {
                items.push_back({{"id", e.id},
                                 {"threat", e.threat},
                                 {"status", assessment::to_string(e.status)},
                                 {"revision", e.revision}});
            }
            send_json(res, {{"assessments", items}});
        });
    });

    srv.Post("/assessments", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            Json body = codec::parse(req.body, "request body");
            if (body.is_object() && (!body.contains("id") || body["id"] == "")) {
                body["id"] = generate_id(docs, body.value("threat", std::string{}));
            }
            auto doc = codec::assessment_from_json(body);
            require_valid(assessment::validate_document(doc, cat, scheme), doc.id);
            docs.put(doc, 0);
            send_json(res, codec::to_json(docs.get(doc.id)), 201);
        });
    });

    srv.Get("/assessments/:id", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, codec::to_json(docs.get(req.path_params.at("id")))); });
    });

    srv.Put("/assessments/:id", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const std::string id = req.path_params.at("id");
            Json body = codec::parse(req.body, "request body");
            if (body.is_object() && !body.contains("id")) body["id"] = id;
            auto doc = codec::assessment_from_json(body);
            if (doc.id != id) {
                throw Error(ErrorCode::Validation, "body id '" + doc.id + "' does not match path id '" + id + "'", id);
            }
            require_valid(assessment::validate_document(doc, cat, scheme), id);
            docs.put(doc, expected_revision(req, doc));
            send_json(res, codec::to_json(docs.get(id)));
        });
    });

    srv.Delete("/assessments/:id", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const std::string id = req.path_params.at("id");
            docs.remove(id);
            send_json(res, {{"deleted", id}});
        });
    });

    srv.Post("/evaluate", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const Json body = codec::parse(req.body, "request body");
            rating::RiskRating rating;
            if (codec::kind_of(body) == codec::kind::kAssessment) {
                rating = assessment::evaluate_document(codec::assessment_from_json(body), scheme);
            } else {
                const Json& payload = body.is_object() && body.contains("assignments") ? body["assignments"] : body;
                const auto assignments = codec::assignments_from_json(payload);
                rating = rating::evaluate(assignments, scheme);
            }
            send_json(res, codec::to_json(rating));
        });
    });

    srv.Post("/assessments/:id/whatif", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto doc = docs.get(req.path_params.at("id"));
            const auto adjustment = codec::adjustment_from_json(codec::parse(req.body, "request body"));
            const auto outcome = assessment::apply_adjustment(doc, adjustment, scheme);
            send_json(res, {{"id", doc.id},
                            {"label", adjustment.label},
                            {"before", codec::to_json(outcome.before)},
                            {"after", codec::to_json(outcome.after)}});
        });
    });

    srv.Post("/assessments/:id/status", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto doc = docs.get(req.path_params.at("id"));
            const Json body = codec::parse(req.body, "request body");
            if (!body.is_object() || !body.contains("target") || !body["target"].is_string()) {
                throw Error(ErrorCode::Parse, "body must be {\"target\": <status>}", "target");
            }
            const auto target = assessment::parse_status(body["target"].get<std::string>());
            const std::uint64_t base = doc.revision;
            if (body.contains("expected_revision")) {
                const auto expected = body["expected_revision"].get<std::uint64_t>();
                if (expected != base) {
                    throw Error(ErrorCode::VersionConflict,
                                "document '" + doc.id + "' is at revision " + std::to_string(base), doc.id);
                }
            }
            if (body.contains("acceptance_note")) doc.treatment.acceptance_note = body["acceptance_note"].get<std::string>();
            if (body.contains("disposition")) doc.treatment.disposition = body["disposition"].get<std::string>();
            const auto next = assessment::advance_status(doc, target, scheme);
            docs.put(next, base);
            send_json(res, codec::to_json(docs.get(next.id)));
        });
    });

    srv.Get("/matrix", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto format = matrix::parse_format(req.has_param("format") ? req.get_param_value("format") : "json");
            const auto assessments = docs.all();
            const auto m = matrix::build_matrix(cat, assessments, scheme, stakeholder_param(req));
            const char* type = format == matrix::Format::Csv        ? "text/csv"
                               : format == matrix::Format::Markdown ? "text/markdown"
                                                                    : kJsonType;
            res.set_content(matrix::render(m, format), type);
        });
    });
}

}  // namespace llmrisk::service
