#pragma once

#include <stdexcept>
#include <string>

namespace ens {

/// Base of every domain error raised by the library. The CLI maps these to
/// exit code 1; anything else escaping a command is an internal error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class NormalizationError : public Error {
public:
    using Error::Error;
};

/// A constraint of the fixed-energy manifold is violated. `value()` is the
/// offending quantity and `bound()` the limit it crossed.
class Infeasible : public Error {
public:
    Infeasible(const std::string& what, double value, double bound)
        : Error(what), value_(value), bound_(bound) {}

    double value() const noexcept { return value_; }
    double bound() const noexcept { return bound_; }

private:
    double value_;
    double bound_;
};

/// No state over the spectrum has the requested total energy; `bound()` is
/// the saturated level.
class InfeasibleEnergy : public Infeasible {
public:
    using Infeasible::Infeasible;
    double energy() const noexcept { return value(); }
};

/// Two distinct energy values are needed to solve the constraints.
class PivotError : public Error {
public:
    using Error::Error;
};

class SingularParameter : public Error {
public:
    using Error::Error;
};

class UnsupportedSize : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace ens
