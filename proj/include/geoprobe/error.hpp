#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geoprobe {

enum class ErrorCode {
    InvalidInput,
    Domain,
    NoIntersection,
    ParallelCoincident,
    ParallelDisjoint,
    NoCircle,
    GenerationExhausted,
    RayGrazesVertex,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "invalid-input";
        case ErrorCode::Domain: return "domain";
        case ErrorCode::NoIntersection: return "no-intersection";
        case ErrorCode::ParallelCoincident: return "parallel-lines (coincident)";
        case ErrorCode::ParallelDisjoint: return "parallel-lines (disjoint)";
        case ErrorCode::NoCircle: return "no-circle";
        case ErrorCode::GenerationExhausted: return "generation-exhausted";
        case ErrorCode::RayGrazesVertex: return "ray-grazes-vertex";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    bool is_parallel() const noexcept {
        return code_ == ErrorCode::ParallelCoincident || code_ == ErrorCode::ParallelDisjoint;
    }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) fail(code, what);
}

}  // namespace geoprobe
