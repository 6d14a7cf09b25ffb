#include "regarma/error.hpp"

namespace regarma {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ConstantColumn: return "ConstantColumn";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::OrderTooLarge: return "OrderTooLarge";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Config: return "Config";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

bool Error::is_input_error() const noexcept {
    switch (code_) {
        case ErrorCode::NonFinite:
        case ErrorCode::ConstantColumn:
        case ErrorCode::OrderTooLarge:
        case ErrorCode::ShapeMismatch:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::LengthMismatch:
        case ErrorCode::TooShort:
        case ErrorCode::TooFewSamples:
        case ErrorCode::InvalidArgument:
        case ErrorCode::Config:
        case ErrorCode::Io:
        case ErrorCode::Parse:
            return true;
        case ErrorCode::InsufficientHistory:
            return false;
    }
    return false;
}

}  // namespace regarma
