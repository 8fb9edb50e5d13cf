#pragma once

#include "llmrisk/assessment.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace llmrisk::store {

struct ListingEntry {
    std::string id;
    std::string threat;
    assessment::Status status = assessment::Status::Identified;
    std::uint64_t revision = 0;

    friend bool operator==(const ListingEntry&, const ListingEntry&) = default;
};

// Points in a write at which a test can inject a failure.
enum class WriteStage { TempPartiallyWritten, TempComplete, Committed };

// A directory of assessment documents, one "<id>.json" file each.
//
// Writes go to "<root>/.tmp/" first and are renamed over the primary file, so
// a reader (or a crash) only ever sees a complete old or new version. Writes
// to one id are serialized; a put carrying a stale expected revision fails
// with Error(VersionConflict).
class DocumentStore {
public:
    explicit DocumentStore(std::filesystem::path root);

    DocumentStore(const DocumentStore&) = delete;
    DocumentStore& operator=(const DocumentStore&) = delete;

    const std::filesystem::path& root() const noexcept { return root_; }

    // Stores `doc` with revision = current + 1 and returns that revision.
    // `expected_revision` 0 means "must not exist yet".
    std::uint64_t put(assessment::AssessmentDocument doc, std::optional<std::uint64_t> expected_revision = std::nullopt);

    assessment::AssessmentDocument get(const std::string& id) const;
    bool contains(const std::string& id) const;

    // Sorted by id.
    std::vector<ListingEntry> list() const;
    std::vector<assessment::AssessmentDocument> all() const;

    void remove(const std::string& id);

    // Revision recorded in the in-memory index (0 when absent).
    std::uint64_t indexed_revision(const std::string& id) const;

    // Test hook invoked at each WriteStage; throwing from it aborts the write.
    void set_write_hook(std::function<void(WriteStage)> hook) { write_hook_ = std::move(hook); }

    std::filesystem::path path_for(const std::string& id) const;

private:
    std::shared_ptr<std::mutex> lock_for(const std::string& id);
    std::uint64_t revision_on_disk(const std::string& id) const;
    void write_atomically(const std::string& id, const std::string& bytes);
    void rebuild_index();

    std::filesystem::path root_;
    std::filesystem::path temp_dir_;
    std::function<void(WriteStage)> write_hook_;

    std::mutex locks_mutex_;
    std::map<std::string, std::shared_ptr<std::mutex>> locks_;

    mutable std::shared_mutex index_mutex_;
    std::map<std::string, std::uint64_t> index_;
};

// Reads every "<id>.json" document in `dir`, sorted by id, without creating
// or modifying anything.
std::vector<assessment::AssessmentDocument> read_directory(const std::filesystem::path& dir);

}  // namespace llmrisk::store
