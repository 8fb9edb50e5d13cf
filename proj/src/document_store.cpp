#include "llmrisk/document_store.hpp"

#include "llmrisk/codec.hpp"
#include "llmrisk/error.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <random>

namespace llmrisk::store {

namespace fs = std::filesystem;
using assessment::AssessmentDocument;

namespace {

constexpr std::string_view kExtension = ".json";

[[noreturn]] void io_error(const std::string& what, const fs::path& path) {
    throw Error(ErrorCode::Io, what + " '" + path.string() + "': " + std::strerror(errno), path.string());
}

void write_all(int fd, std::string_view bytes, const fs::path& path) {
    while (!bytes.empty()) {
        const ssize_t n = ::write(fd, bytes.data(), bytes.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            io_error("write failed for", path);
        }
        bytes.remove_prefix(static_cast<std::size_t>(n));
    }
}

void fsync_directory(const fs::path& dir) {
    const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
    if (fd >= 0) {
        ::fsync(fd);
        ::close(fd);
    }
}

std::string unique_suffix() {
    static std::atomic<std::uint64_t> counter{0};
    thread_local std::mt19937_64 rng{std::random_device{}()};
    return std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1)) + "-" + std::to_string(rng() % 1000000);
}

bool is_document_file(const fs::directory_entry& entry) {
    const auto name = entry.path().filename().string();
    return entry.is_regular_file() && !name.empty() && name.front() != '.' && entry.path().extension() == kExtension;
}

AssessmentDocument read_document(const fs::path& path, const std::string& expected_id) {
    AssessmentDocument doc = codec::assessment_from_json(codec::read_json_file(path));
    if (!expected_id.empty() && doc.id != expected_id) {
        throw Error(ErrorCode::Parse, "file '" + path.string() + "' holds document '" + doc.id + "'", path.string());
    }
    return doc;
}

void require_valid_id(const std::string& id) {
    if (!assessment::is_valid_document_id(id)) {
        throw Error(ErrorCode::Validation, "invalid document id '" + id + "'", id);
    }
}

}  // namespace

DocumentStore::DocumentStore(fs::path root) : root_(std::move(root)), temp_dir_(root_ / ".tmp") {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) {
        throw Error(ErrorCode::Io, "cannot create store at '" + root_.string() + "': " + ec.message(), root_.string());
    }
    // Leftovers from interrupted writes; the primary files are unaffected.
    if (fs::exists(temp_dir_, ec)) {
        for (const auto& entry : fs::directory_iterator(temp_dir_, ec)) {
            fs::remove(entry.path(), ec);
        }
    }
    rebuild_index();
}

fs::path DocumentStore::path_for(const std::string& id) const { return root_ / (id + std::string(kExtension)); }

std::shared_ptr<std::mutex> DocumentStore::lock_for(const std::string& id) {
    std::lock_guard guard(locks_mutex_);
    auto& slot = locks_[id];
    if (!slot) slot = std::make_shared<std::mutex>();
    return slot;
}

std::uint64_t DocumentStore::revision_on_disk(const std::string& id) const {
    const fs::path path = path_for(id);
    std::error_code ec;
    if (!fs::exists(path, ec)) return 0;
    return read_document(path, id).revision;
}

void DocumentStore::rebuild_index() {
    std::map<std::string, std::uint64_t> fresh;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(root_, ec)) {
        if (!is_document_file(entry)) continue;
        const std::string id = entry.path().stem().string();
        fresh[id] = read_document(entry.path(), id).revision;
    }
    std::unique_lock lock(index_mutex_);
    index_ = std::move(fresh);
}

void DocumentStore::write_atomically(const std::string& id, const std::string& bytes) {
    std::error_code ec;
    fs::create_directories(temp_dir_, ec);
    if (ec) {
        throw Error(ErrorCode::Io, "cannot create '" + temp_dir_.string() + "': " + ec.message(), temp_dir_.string());
    }
    const fs::path temp = temp_dir_ / (id + "." + unique_suffix() + ".tmp");
    const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
    if (fd < 0) io_error("cannot create", temp);
    try {
        const std::size_t half = bytes.size() / 2;
        write_all(fd, std::string_view(bytes).substr(0, half), temp);
        if (write_hook_) write_hook_(WriteStage::TempPartiallyWritten);
        write_all(fd, std::string_view(bytes).substr(half), temp);
        if (::fsync(fd) != 0) io_error("fsync failed for", temp);
        if (write_hook_) write_hook_(WriteStage::TempComplete);
    } catch (...) {
        ::close(fd);
        std::error_code ignored;
        fs::remove(temp, ignored);
        throw;
    }
    ::close(fd);
    if (::rename(temp.c_str(), path_for(id).c_str()) != 0) {
        std::error_code ignored;
        fs::remove(temp, ignored);
        io_error("cannot commit", path_for(id));
    }
    fsync_directory(root_);
    if (write_hook_) write_hook_(WriteStage::Committed);
}

std::uint64_t DocumentStore::put(AssessmentDocument doc, std::optional<std::uint64_t> expected_revision) {
    require_valid_id(doc.id);
    const auto lock = lock_for(doc.id);
    std::lock_guard guard(*lock);

    const std::uint64_t current = revision_on_disk(doc.id);
    if (expected_revision && *expected_revision != current) {
        throw Error(ErrorCode::VersionConflict,
                    "document '" + doc.id + "' is at revision " + std::to_string(current) + ", expected " +
                        std::to_string(*expected_revision),
                    doc.id);
    }
    doc.revision = current + 1;
    write_atomically(doc.id, codec::dump(codec::to_json(doc)));

    std::unique_lock index_lock(index_mutex_);
    index_[doc.id] = doc.revision;
    return doc.revision;
}

AssessmentDocument DocumentStore::get(const std::string& id) const {
    require_valid_id(id);
    const fs::path path = path_for(id);
    std::error_code ec;
    if (!fs::exists(path, ec)) {
        throw Error(ErrorCode::NotFound, "no document '" + id + "'", id);
    }
    try {
        return read_document(path, id);
    } catch (const Error& e) {
        // Deleted between the existence check and the read.
        if (e.code() == ErrorCode::Io && !fs::exists(path, ec)) {
            throw Error(ErrorCode::NotFound, "no document '" + id + "'", id);
        }
        throw;
    }
}

bool DocumentStore::contains(const std::string& id) const {
    std::error_code ec;
    return assessment::is_valid_document_id(id) && fs::exists(path_for(id), ec);
}

std::vector<ListingEntry> DocumentStore::list() const {
    std::vector<ListingEntry> out;
    for (const auto& doc : all()) {
        out.push_back({doc.id, doc.threat, doc.status, doc.revision});
    }
    return out;
}

std::vector<AssessmentDocument> DocumentStore::all() const { return read_directory(root_); }

std::vector<AssessmentDocument> read_directory(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw Error(ErrorCode::Io, "not a directory: '" + dir.string() + "'", dir.string());
    }
    std::map<std::string, AssessmentDocument> by_id;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!is_document_file(entry)) continue;
        const std::string id = entry.path().stem().string();
        try {
            by_id.emplace(id, read_document(entry.path(), id));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Io && !fs::exists(entry.path(), ec)) continue;  // deleted concurrently
            throw;
        }
    }
    if (ec) {
        throw Error(ErrorCode::Io, "cannot list '" + dir.string() + "': " + ec.message(), dir.string());
    }
    std::vector<AssessmentDocument> out;
    out.reserve(by_id.size());
    for (auto& [id, doc] : by_id) out.push_back(std::move(doc));
    return out;
}

void DocumentStore::remove(const std::string& id) {
    require_valid_id(id);
    const auto lock = lock_for(id);
    std::lock_guard guard(*lock);
    std::error_code ec;
    if (!fs::remove(path_for(id), ec)) {
        if (ec) throw Error(ErrorCode::Io, "cannot delete '" + id + "': " + ec.message(), id);
        throw Error(ErrorCode::NotFound, "no document '" + id + "'", id);
    }
    fsync_directory(root_);
    std::unique_lock index_lock(index_mutex_);
    index_.erase(id);
}

std::uint64_t DocumentStore::indexed_revision(const std::string& id) const {
    std::shared_lock lock(index_mutex_);
    auto it = index_.find(id);
    return it == index_.end() ? 0 : it->second;
}

}  // namespace llmrisk::store
