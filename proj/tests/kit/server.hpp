#pragma once

#include "llmrisk/api_server.hpp"

#include <httplib.h>
#include <unistd.h>

#include <filesystem>
#include <memory>
#include <string>
#include <thread>

namespace llmrisk::testkit {

// Runs an ApiServer on a free loopback port over a scratch store.
class RunningServer {
public:
    explicit RunningServer(const std::string& tag) {
        root_ = std::filesystem::temp_directory_path() / ("llmrisk_api_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(root_);
        service::ServiceConfig config;
        config.port = 0;
        config.store_root = root_;
        server_ = std::make_unique<service::ApiServer>(std::move(config));
        port_ = server_->bind();
        thread_ = std::thread([this] { server_->run(); });
    }

    ~RunningServer() {
        server_->stop();
        thread_.join();
        server_.reset();
        std::filesystem::remove_all(root_);
    }

    httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }
    service::ApiServer& server() { return *server_; }
    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
    std::unique_ptr<service::ApiServer> server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace llmrisk::testkit
