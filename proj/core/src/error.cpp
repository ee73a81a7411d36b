#include "tangleroof/error.hpp"

namespace tangleroof {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::dimension_mismatch: return "dimension-mismatch";
        case ErrorCode::rank_exceeded: return "rank-exceeded";
        case ErrorCode::identically_zero: return "identically-zero";
        case ErrorCode::empty_polytope: return "empty-polytope";
        case ErrorCode::infeasible: return "infeasible";
        case ErrorCode::ill_posed: return "ill-posed";
        case ErrorCode::parse_error: return "parse-error";
    }
    return "unknown";
}

}  // namespace tangleroof
