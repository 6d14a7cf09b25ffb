#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace regarma {

enum class ErrorCode {
    ConstantColumn,
    NonFinite,
    OrderTooLarge,
    DimensionMismatch,
    ShapeMismatch,
    InsufficientHistory,
    LengthMismatch,
    TooShort,
    TooFewSamples,
    InvalidArgument,
    Config,
    Io,
    Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

    /// True for errors caused by bad user input (as opposed to numerical trouble).
    [[nodiscard]] bool is_input_error() const noexcept;

private:
    ErrorCode code_;
};

}  // namespace regarma
