#pragma once

#include <stdexcept>
#include <string>

namespace solitonforge {

/// Invalid construction parameters (dimensions, non-positive amplitudes, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Evaluation requested outside the validity domain of a profile or chart.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Conformal factor became non-positive where it must stay positive.
struct PositivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A forced algebraic constraint between constants is violated.
struct ConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Metric not invertible at an evaluation point.
struct SingularMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Degenerate tangent plane passed to a sectional-curvature evaluation.
struct PlaneError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Adaptive step-size control failed to make progress.
struct StiffnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace solitonforge
