#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orbprod {

enum class ErrorKind {
    DegenerateClass,
    DegenerateInput,
    TraceBelowTwo,
    UnsortedInput,
    InvalidParams,
    CoincidentPoints,
    FoldedRegime,
    NumericalFailure,
};

constexpr std::string_view to_string(ErrorKind k) noexcept {
    switch (k) {
    case ErrorKind::DegenerateClass: return "DegenerateClass";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::TraceBelowTwo: return "TraceBelowTwo";
    case ErrorKind::UnsortedInput: return "UnsortedInput";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::FoldedRegime: return "FoldedRegime";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    }
    return "Unknown";
}

// what() always starts with the kind name so command-line callers can grep it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace orbprod
