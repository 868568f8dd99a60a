#include "bhmc/errors.hpp"

namespace bhmc {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MissingTailInfo: return "MissingTailInfo";
        case ErrorCode::InvalidBlock: return "InvalidBlock";
        case ErrorCode::BadDistribution: return "BadDistribution";
        case ErrorCode::UnstableModel: return "UnstableModel";
        case ErrorCode::BadRates: return "BadRates";
        case ErrorCode::SingularBlock: return "SingularBlock";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::EmptyCandidateSet: return "EmptyCandidateSet";
        case ErrorCode::UnsupportedInfiniteBand: return "UnsupportedInfiniteBand";
        case ErrorCode::NotQbd: return "NotQbd";
        case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
        case ErrorCode::PhaseMismatch: return "PhaseMismatch";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

namespace {
std::string decorate(ErrorCode code, const std::string& what, std::optional<std::size_t> level) {
    std::string msg = std::string(to_string(code)) + ": " + what;
    if (level) msg += " (level " + std::to_string(*level) + ")";
    return msg;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& what, std::optional<std::size_t> level)
    : std::runtime_error(decorate(code, what, level)), code_(code), level_(level) {}

}  // namespace bhmc
