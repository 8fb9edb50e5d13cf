#include "llmrisk/error.hpp"

namespace llmrisk {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Validation: return "validation";
        case ErrorCode::IncompleteFactors: return "incomplete_factors";
        case ErrorCode::Domain: return "domain";
        case ErrorCode::Parse: return "parse";
        case ErrorCode::NotFound: return "not_found";
        case ErrorCode::VersionConflict: return "version_conflict";
        case ErrorCode::Guard: return "guard";
        case ErrorCode::Sequencing: return "sequencing";
        case ErrorCode::Ambiguity: return "ambiguity";
        case ErrorCode::Join: return "join";
        case ErrorCode::Usage: return "usage";
        case ErrorCode::Io: return "io_failure";
    }
    return "unknown";
}

namespace {

std::string describe_missing(const std::vector<std::string>& missing) {
    std::string message = "incomplete factor assignment; missing: ";
    for (std::size_t i = 0; i < missing.size(); ++i) {
        if (i != 0) message += ", ";
        message += missing[i];
    }
    return message;
}

}  // namespace

IncompleteFactorsError::IncompleteFactorsError(std::vector<std::string> missing)
    : Error(ErrorCode::IncompleteFactors, describe_missing(missing), missing.empty() ? "" : missing.front()),
      missing_(std::move(missing)) {}

}  // namespace llmrisk
