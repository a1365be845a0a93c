#ifndef DSM_ERRORS_HPP
#define DSM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dsm {

/// Base class for all library errors. `category()` is a stable,
/// machine-readable tag used by the CLI for exit reporting.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const { return category_; }

private:
    std::string category_;
};

/// Vector/matrix dimensions do not agree.
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& message)
        : Error("dimension-mismatch", message) {}
};

/// Matrix is singular to working precision. In the solver context this
/// usually signals a regularizer that has decayed too far or a
/// non-monotone operator.
class SingularMatrix : public Error {
public:
    explicit SingularMatrix(const std::string& message)
        : Error("singular-matrix", message) {}
};

/// Newton iteration failed to reach tolerance within its budget.
class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& message)
        : Error("no-convergence", message) {}
};

/// Adaptive step size collapsed below the representable floor.
class StepSizeCollapse : public Error {
public:
    explicit StepSizeCollapse(const std::string& message)
        : Error("step-size-collapse", message) {}
};

/// Step budget exhausted before reaching the end time.
class MaxStepsExceeded : public Error {
public:
    explicit MaxStepsExceeded(const std::string& message)
        : Error("max-steps", message) {}
};

/// Scalar majorant solution exceeded its admissible bound; the
/// validity conditions are violated.
class BlowUp : public Error {
public:
    explicit BlowUp(const std::string& message) : Error("blow-up", message) {}
};

/// Adaptive quadrature failed to converge.
class QuadratureFailure : public Error {
public:
    explicit QuadratureFailure(const std::string& message)
        : Error("quadrature", message) {}
};

/// Noise level too large for a finite positive stopping time.
class NoFiniteStop : public Error {
public:
    explicit NoFiniteStop(const std::string& message)
        : Error("no-finite-stop", message) {}
};

/// Trajectory left the tracking ball around the initial point.
class TrajectoryEscape : public Error {
public:
    explicit TrajectoryEscape(const std::string& message)
        : Error("trajectory-escape", message) {}
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message)
        : Error("config", message) {}
};

/// Schedule conditions failed validation and strict mode is on.
class ConditionViolation : public Error {
public:
    explicit ConditionViolation(const std::string& message)
        : Error("conditions", message) {}
};

/// Filesystem/output failure.
class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io", message) {}
};

}  // namespace dsm

#endif  // DSM_ERRORS_HPP
