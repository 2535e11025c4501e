#ifndef PITCHTRACK_CORE_ERROR_HPP
#define PITCHTRACK_CORE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pitchtrack {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate or non-finite box geometry.
class InvalidGeometry : public Error {
public:
    using Error::Error;
};

/// A line of a record stream could not be decoded.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string provenance, const std::string& what)
        : Error(provenance + ":" + std::to_string(line) + ": " + what),
          line_(line), provenance_(std::move(provenance)) {}

    std::size_t line() const { return line_; }
    const std::string& provenance() const { return provenance_; }

private:
    std::size_t line_;
    std::string provenance_;
};

/// A decoded record violates a field constraint.
class ValidationError : public Error {
public:
    ValidationError(std::size_t line, std::string provenance, std::string field, const std::string& what)
        : Error(provenance + ":" + std::to_string(line) + ": field \"" + field + "\": " + what),
          line_(line), provenance_(std::move(provenance)), field_(std::move(field)) {}

    std::size_t line() const { return line_; }
    const std::string& provenance() const { return provenance_; }
    const std::string& field() const { return field_; }

private:
    std::size_t line_;
    std::string provenance_;
    std::string field_;
};

/// An embedding points at a detection that does not exist.
class LinkError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// The external detector could not be launched or failed.
class AdapterError : public Error {
public:
    using Error::Error;
};

/// Frames were fed to the tracker out of order or mixed within one step.
class SequencingError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class OptimizationDiverged : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace pitchtrack

#endif
