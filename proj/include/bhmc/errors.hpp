#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace bhmc {

enum class ErrorCode {
    MissingTailInfo,
    InvalidBlock,
    BadDistribution,
    UnstableModel,
    BadRates,
    SingularBlock,
    IndexOutOfRange,
    EmptyCandidateSet,
    UnsupportedInfiniteBand,
    NotQbd,
    NonpositiveWeight,
    PhaseMismatch,
    ConfigError,
};

const char* to_string(ErrorCode code) noexcept;

/// Base of every library error. `level` carries the generator level at which
/// the failure surfaced, when one is meaningful.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::optional<std::size_t> level = {});

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> level() const noexcept { return level_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> level_;
};

#define BHMC_DEFINE_ERROR(Name)                                                   \
    class Name : public Error {                                                   \
    public:                                                                       \
        explicit Name(const std::string& what, std::optional<std::size_t> level = {}) \
            : Error(ErrorCode::Name, what, level) {}                              \
    }

BHMC_DEFINE_ERROR(MissingTailInfo);
BHMC_DEFINE_ERROR(InvalidBlock);
BHMC_DEFINE_ERROR(BadDistribution);
BHMC_DEFINE_ERROR(UnstableModel);
BHMC_DEFINE_ERROR(BadRates);
BHMC_DEFINE_ERROR(SingularBlock);
BHMC_DEFINE_ERROR(IndexOutOfRange);
BHMC_DEFINE_ERROR(EmptyCandidateSet);
BHMC_DEFINE_ERROR(UnsupportedInfiniteBand);
BHMC_DEFINE_ERROR(NotQbd);
BHMC_DEFINE_ERROR(NonpositiveWeight);
BHMC_DEFINE_ERROR(PhaseMismatch);
BHMC_DEFINE_ERROR(ConfigError);

#undef BHMC_DEFINE_ERROR

}  // namespace bhmc
