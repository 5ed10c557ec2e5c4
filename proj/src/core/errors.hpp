#pragma once

#include <stdexcept>
#include <string>

namespace ifrac {

/// Base class of every error raised by the core library. The C API maps each
/// subclass onto a status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

/// A fracture path does not follow mesh edges.
class ConformityError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

/// Fracture network topology the splitter cannot represent (e.g. a tip that
/// ends inside a subdomain).
class TopologyError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace ifrac
