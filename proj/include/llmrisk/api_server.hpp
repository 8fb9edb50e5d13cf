#pragma once

#include "llmrisk/catalog.hpp"
#include "llmrisk/document_store.hpp"
#include "llmrisk/error.hpp"
#include "llmrisk/rating.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace llmrisk::service {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::filesystem::path store_root = "assessments";
    rating::RatingScheme scheme = rating::default_scheme();
    catalog::Catalog catalog = catalog::bundled_catalog();
    std::optional<std::filesystem::path> static_dir;  // served at "/" when set
};

// HTTP status for an error code: 400 validation family, 404, 409, 422
// lifecycle/join family, 500 I/O.
int http_status_for(ErrorCode code);

// JSON-over-HTTP front end for the engine and the document store.
//
//   GET  /catalog[?stakeholder=..]  GET /catalog/{id}   GET /scheme
//   GET  /assessments               POST /assessments
//   GET|PUT|DELETE /assessments/{id}
//   POST /assessments/{id}/whatif   POST /assessments/{id}/status
//   POST /evaluate                  GET /matrix[?stakeholder=..&format=..]
class ApiServer {
public:
    explicit ApiServer(ServiceConfig config);
    ~ApiServer();

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    // Binds the listening socket and returns the bound port.
    int bind();
    // Blocks serving requests until stop(). Requires bind().
    void run();
    void stop();

    store::DocumentStore& store() noexcept { return *store_; }

private:
    void install_routes();

    ServiceConfig config_;
    std::unique_ptr<store::DocumentStore> store_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace llmrisk::service
