#pragma once

#include <stdexcept>
#include <string>

namespace abel {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the admissible exponents, annuli or angles.
class DomainError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

// Adaptive scheme ran out of its subdivision or step budget.
class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A fit or interpolation that should be exact was not.
class StructuralFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what), line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace abel
