#pragma once

#include <stdexcept>
#include <string>

namespace visnf {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: bad shapes, parse errors, undeclared variables,
// base point not on the surface, order budget too small.  CLI exit code 1.
struct input_error : error {
    explicit input_error(const std::string& what) : error(what) {}
};

// A mathematical precondition does not hold for otherwise well-formed
// input: transversal point, non-simple contact, equilibrium, contact
// order undecidable at the working jet order, series not t-regular.
// CLI exit code 2.
struct precondition_error : error {
    explicit precondition_error(const std::string& what) : error(what) {}
};

// Violation of an invariant the pipeline itself guarantees; indicates a
// bug upstream, not a user input case.
struct internal_error : error {
    explicit internal_error(const std::string& what) : error(what) {}
};

}  // namespace visnf
