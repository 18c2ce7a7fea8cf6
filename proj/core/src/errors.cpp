#include "xxz/errors.hpp"

namespace xxz {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::solver_failure: return "solver-failure";
    case ErrorKind::bracket_failure: return "bracket-failure";
    case ErrorKind::integration_failure: return "integration-failure";
    case ErrorKind::pole_proximity: return "pole-proximity";
    case ErrorKind::contour_failure: return "contour-failure";
    case ErrorKind::invalid_string: return "invalid-string";
    case ErrorKind::degenerate_anisotropy: return "degenerate-anisotropy";
    case ErrorKind::sign_inconsistency: return "sign-inconsistency";
    case ErrorKind::near_critical: return "near-critical";
    case ErrorKind::degenerate_saddle: return "degenerate-saddle";
    case ErrorKind::regime_mismatch: return "regime-mismatch";
    case ErrorKind::consistency_failure: return "consistency-failure";
    case ErrorKind::reduction_mismatch: return "reduction-mismatch";
    case ErrorKind::inconclusive: return "inconclusive";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

} // namespace xxz
