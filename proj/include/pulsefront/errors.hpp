#ifndef PULSEFRONT_ERRORS_HPP
#define PULSEFRONT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pulsefront {

/// Base class for all failures raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A reaction evaluator returned a non-finite value or is otherwise unusable.
class MalformedReactionError : public Error {
public:
    using Error::Error;
};

/// An iterative solver failed to converge; carries the final residual.
class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& msg, double residual)
        : Error(msg + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_ = 0.0;
};

/// NaN or Inf appeared in a simulated field.
class BlowupError : public Error {
public:
    BlowupError(const std::string& msg, double t)
        : Error(msg + " at t=" + std::to_string(t)), time_(t) {}
    double time() const { return time_; }

private:
    double time_ = 0.0;
};

/// The tracked interface reached the guard band of the moving window.
class WindowOverflowError : public Error {
public:
    using Error::Error;
};

/// Eigenvalue/speed search left its admissible bracket.
class UnboundedSearchError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Crossing data is too disordered to be a traveling interface.
class NotAFrontError : public Error {
public:
    using Error::Error;
};

/// |c| below the floor: the traveling-coordinate change of variables degenerates.
class DegenerateCoordinatesError : public Error {
public:
    using Error::Error;
};

class MultiInterfaceError : public Error {
public:
    using Error::Error;
};

class NoInterfaceError : public Error {
public:
    using Error::Error;
};

class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// Equilibrium requested from a state that has not relaxed yet.
class PrematureExtractionError : public Error {
public:
    using Error::Error;
};

/// Half-line pieces do not match in C1 at the junction point.
class InvalidGluingError : public Error {
public:
    using Error::Error;
};

/// Two routes that must agree produced different answers.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace pulsefront

#endif
