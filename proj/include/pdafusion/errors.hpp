#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pdaf {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario or input failed validation. Carries every violation found,
/// each prefixed with the offending field path.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    ValidationError(const std::string& field, const std::string& message);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Malformed structured text. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A matrix that must be positive definite is not, a gain cannot be formed, etc.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Target coincides with a radar so range/bearing are undefined.
class SingularGeometryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// All fusion weights are zero.
class DegenerateWeightsError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& message);

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace pdaf
