#pragma once

#include <stdexcept>
#include <string>

namespace tethersim {

/// Base class for all expected failures. What derives from it maps onto the
/// CLI exit-code taxonomy: configuration/validation problems exit 1, runtime
/// instability exits 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

class SingularAttitude : public Error {
public:
    using Error::Error;
};

class UnknownPreset : public Error {
public:
    using Error::Error;
};

class TautCable : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class OutOfDomain : public Error {
public:
    using Error::Error;
};

class BadInitShape : public Error {
public:
    using Error::Error;
};

class UnknownSet : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerical blow-up during a run; carries the step index it was detected at.
class Unstable : public Error {
public:
    Unstable(const std::string& what, long step = -1)
        : Error(what + (step >= 0 ? " (step " + std::to_string(step) + ")" : "")),
          step_index(step) {}
    long step_index;
};

}  // namespace tethersim
