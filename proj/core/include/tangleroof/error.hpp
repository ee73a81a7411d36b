#pragma once

#include <stdexcept>
#include <string>

namespace tangleroof {

enum class ErrorCode {
    invalid_argument,
    dimension_mismatch,
    rank_exceeded,
    identically_zero,
    empty_polytope,
    infeasible,
    ill_posed,
    parse_error,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tangleroof
