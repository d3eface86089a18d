#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace foulwall {

/// Base class of every error thrown by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario/config problems: unparseable files, unknown keys, invalid values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem problems: unreadable inputs, unwritable outputs.
class IoError : public Error {
public:
    using Error::Error;
};

class OutOfRangeError : public Error {
public:
    using Error::Error;
};

class NonNormalizedError : public Error {
public:
    using Error::Error;
};

class NegativeInputError : public Error {
public:
    using Error::Error;
};

class NoBracketError : public Error {
public:
    using Error::Error;
};

class BadMeshSpecError : public Error {
public:
    using Error::Error;
};

class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// Carries the residual history of the failed iteration.
class NotConvergedError : public Error {
public:
    NotConvergedError(const std::string& what, std::vector<double> history)
        : Error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

class FitDivergedError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class NotBracketedError : public Error {
public:
    using Error::Error;
};

class GridMismatchError : public Error {
public:
    using Error::Error;
};

class VersionMismatchError : public Error {
public:
    using Error::Error;
};

class CorruptFileError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

} // namespace foulwall
