#pragma once

#include <stdexcept>
#include <string>

namespace benj {

// Iteration budget exhausted without meeting the tolerance.
struct NonConvergence : std::runtime_error {
    int iterations;
    double last_residual;
    NonConvergence(const std::string& what, int iters, double resid)
        : std::runtime_error(what), iterations(iters), last_residual(resid) {}
};

// Iterates shrank to the zero solution.
struct CollapseToZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter outside the region a method is defined on.
struct RangeError : std::domain_error {
    using std::domain_error::domain_error;
};

// A computation whose premise fails (e.g. inverting onto the kernel).
struct IllPosed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace benj
