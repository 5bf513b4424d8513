#pragma once

#include <stdexcept>
#include <string>

namespace nfa {

// Mirrors the public nfa_status values so the C wrapper can translate 1:1.
enum class errc {
    invalid_argument = 1,
    parse = 2,
    validation = 3,
    infeasible_geometry = 4,
    degenerate_array = 5,
    singular_fim = 6,
    empty_feasible_set = 7,
    missing_scheme = 8,
    convergence = 9,
    io = 10,
    internal = 11,
};

class error : public std::runtime_error {
public:
    error(errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, std::string msg) {
    throw error(code, std::move(msg));
}

} // namespace nfa
