#include "renyi/error.hpp"

namespace renyi {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ComplexRoots: return "ComplexRoots";
    case ErrorCode::NegativeRoot: return "NegativeRoot";
    case ErrorCode::InvalidTolerance: return "InvalidTolerance";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidInvariants: return "InvalidInvariants";
    case ErrorCode::OrderOutOfRange: return "OrderOutOfRange";
    case ErrorCode::SingularSpectrum: return "SingularSpectrum";
    case ErrorCode::NegativeEntropy: return "NegativeEntropy";
    case ErrorCode::EntropyTooLarge: return "EntropyTooLarge";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

} // namespace renyi
