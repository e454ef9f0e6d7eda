#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace degenhj {

/// Failure categories raised by the library. The CLI maps them to exit codes.
enum class ErrorCode {
    InvalidInput,
    Dimension,
    DegeneratePoint,
    Numeric,
    Divergence,
    Ordering,
    Region,
    OutOfScope,
    Configuration,
    Range,
    EmptySample,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace degenhj
