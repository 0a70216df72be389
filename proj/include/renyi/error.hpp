#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace renyi {

enum class ErrorCode {
    NegativeEntry,
    NotNormalized,
    DimensionTooSmall,
    DimensionTooLarge,
    NonFinite,
    LengthMismatch,
    ComplexRoots,
    NegativeRoot,
    InvalidTolerance,
    NoConvergence,
    InvalidInvariants,
    OrderOutOfRange,
    SingularSpectrum,
    NegativeEntropy,
    EntropyTooLarge,
    Infeasible,
    ConfigError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the sweep harness) can classify it without parsing text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace renyi
