#pragma once

#include <stdexcept>
#include <string>

namespace setrep {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched matrix/vector dimensions or malformed inputs.
struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Iterative solver failed to reach its tolerance within the iteration cap.
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// Intermediate values left the range where double precision is usable.
struct RangeError : Error {
    explicit RangeError(const std::string& msg) : Error(msg) {}
};

// No verified reconstruction could be produced from an embedding.
struct DecodeError : Error {
    DecodeError(const std::string& msg, double best_residual)
        : Error(msg), best_residual(best_residual) {}
    double best_residual;
};

}  // namespace setrep
