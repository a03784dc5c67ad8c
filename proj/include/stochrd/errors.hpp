#pragma once

#include <stdexcept>
#include <string>

namespace stochrd {

/// Violated precondition on an argument (bad sizes, off-grid times, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A time was requested outside the sampled window of a Wiener path.
class WindowExceeded : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A time stepper produced non-finite values.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double t)
        : std::runtime_error(what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// No absorbing constant was found below the search cap.
class CalibrationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stochrd
