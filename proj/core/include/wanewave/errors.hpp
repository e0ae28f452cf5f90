#pragma once

#include <stdexcept>
#include <string>

namespace wanewave {

/// No endemic steady state exists (R0 <= 1).
struct NoEndemicEquilibrium : std::runtime_error {
    explicit NoEndemicEquilibrium(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative solve ran out of budget before reaching its tolerance.
struct ConvergenceFailure : std::runtime_error {
    explicit ConvergenceFailure(const std::string& msg) : std::runtime_error(msg) {}
};

/// A state or parameter lies outside its admissible domain.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// |Q(i omega)| is numerically zero, so the angle theta is undefined.
struct DegenerateQ : std::runtime_error {
    explicit DegenerateQ(const std::string& msg) : std::runtime_error(msg) {}
};

/// A switch function was evaluated at a delay where its branch root does not exist.
struct OutsideFeasibleInterval : std::runtime_error {
    explicit OutsideFeasibleInterval(const std::string& msg) : std::runtime_error(msg) {}
};

/// Frequency roots are still feasible at the end of the search range.
struct SearchRangeExceeded : std::runtime_error {
    explicit SearchRangeExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

/// Collocation is meaningless for a vanishing delay; use the tau = 0 ODE limit.
struct DegenerateDelay : std::runtime_error {
    explicit DegenerateDelay(const std::string& msg) : std::runtime_error(msg) {}
};

/// Adaptive step size collapsed below the representable resolution.
struct StepSizeUnderflow : std::runtime_error {
    explicit StepSizeUnderflow(const std::string& msg) : std::runtime_error(msg) {}
};

/// Trajectory left the population simplex by more than the escape tolerance.
struct DomainEscape : std::runtime_error {
    explicit DomainEscape(const std::string& msg) : std::runtime_error(msg) {}
};

/// Classification window is shorter than the trajectory can support.
struct WindowTooShort : std::runtime_error {
    explicit WindowTooShort(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace wanewave
