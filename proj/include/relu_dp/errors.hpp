#pragma once

#include <stdexcept>
#include <string>

namespace relu_dp {

// Input vector length does not match the network's input layer.
struct input_shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A pre-activation became NaN or infinite during evaluation.
struct numeric_overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally invalid network or builder misuse.
struct construction_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Out-of-range numeric parameter (p*, P, epsilon, ...).
struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Instance data violates a model invariant (non-integral profit, size outside ]0,1], ...).
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Refused because the requested problem exceeds an enumeration or memory guard.
struct size_guard_error : std::length_error {
    using std::length_error::length_error;
};

// Requested target is not attainable from the given table.
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inputs would push integer-valued pre-activations past exact double range.
struct overflow_risk_error : std::overflow_error {
    using std::overflow_error::overflow_error;
};

} // namespace relu_dp
