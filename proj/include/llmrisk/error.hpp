#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace llmrisk {

// Machine-readable error codes. Every failure raised by the library carries
// exactly one of these; the HTTP layer maps them 1:1 onto ApiError bodies.
enum class ErrorCode {
    Validation,         // structurally invalid input (bad score, unknown factor, ...)
    IncompleteFactors,  // a weighted factor has no assignment
    Domain,             // numeric argument outside its domain
    Parse,              // malformed document
    NotFound,
    VersionConflict,
    Guard,              // lifecycle entry guard unmet
    Sequencing,         // lifecycle transition skips a state
    Ambiguity,          // two assessments target one threat
    Join,               // assessment references a threat not in the catalog
    Usage,
    Io,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string locus = {})
        : std::runtime_error(message), code_(code), locus_(std::move(locus)) {}

    ErrorCode code() const noexcept { return code_; }

    // Factor id, document id or file path the error is about; may be empty.
    const std::string& locus() const noexcept { return locus_; }

private:
    ErrorCode code_;
    std::string locus_;
};

// Raised when one or more weighted factors are unassigned. Lists all of them.
class IncompleteFactorsError : public Error {
public:
    explicit IncompleteFactorsError(std::vector<std::string> missing);

    const std::vector<std::string>& missing() const noexcept { return missing_; }

private:
    std::vector<std::string> missing_;
};

}  // namespace llmrisk
