#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xxz {

enum class ErrorKind {
    invalid_argument,
    solver_failure,
    bracket_failure,
    integration_failure,
    pole_proximity,
    contour_failure,
    invalid_string,
    degenerate_anisotropy,
    sign_inconsistency,
    near_critical,
    degenerate_saddle,
    regime_mismatch,
    consistency_failure,
    reduction_mismatch,
    inconclusive,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a machine-readable kind so the
// CLI can map it onto an exit code and a structured error record.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

} // namespace xxz
