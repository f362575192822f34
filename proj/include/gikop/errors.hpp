#ifndef GIKOP_ERRORS_HPP
#define GIKOP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gikop {

// Base of all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Failures of the computation itself (non-finite values, overflow, caps).
// The CLI maps these to exit code 1.
class NumericalError : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotReachableError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InsufficientSamplesError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Evaluation of a partial function outside its domain (log of non-positive,
// division by zero, ...).
class EvalDomainError : public NumericalError {
public:
    EvalDomainError(const std::string& function, double argument)
        : NumericalError("domain error: " + function + "(" + std::to_string(argument) + ")"),
          function_(function),
          argument_(argument) {}

    const std::string& function() const { return function_; }
    double argument() const { return argument_; }

private:
    std::string function_;
    double argument_;
};

// Ill-formed requests: bad boxes, mismatched rules, malformed config.
// The CLI maps these to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

class InvalidBoxError : public UsageError {
public:
    using UsageError::UsageError;
};

class BudgetExceededError : public UsageError {
public:
    using UsageError::UsageError;
};

class RuleMismatchError : public UsageError {
public:
    using UsageError::UsageError;
};

class DomainMismatchError : public UsageError {
public:
    using UsageError::UsageError;
};

class MissingDerivativesError : public UsageError {
public:
    using UsageError::UsageError;
};

class PointOutsideDomainError : public UsageError {
public:
    using UsageError::UsageError;
};

class ProbeOutsideDomainError : public UsageError {
public:
    using UsageError::UsageError;
};

class UnboundVariableError : public UsageError {
public:
    explicit UnboundVariableError(const std::string& name)
        : UsageError("unbound variable '" + name + "'"), name_(name) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class ConfigError : public UsageError {
public:
    using UsageError::UsageError;
};

// Expression-language parse failure; `position` is a byte offset into the
// source text.
class SyntaxError : public UsageError {
public:
    SyntaxError(std::size_t position, const std::string& what_failed)
        : UsageError("syntax error at offset " + std::to_string(position) + ": " + what_failed),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class UnknownVariableError : public UsageError {
public:
    UnknownVariableError(const std::string& name, std::size_t position)
        : UsageError("unknown variable '" + name + "' at offset " + std::to_string(position)),
          name_(name),
          position_(position) {}

    const std::string& name() const { return name_; }
    std::size_t position() const { return position_; }

private:
    std::string name_;
    std::size_t position_;
};

}  // namespace gikop

#endif  // GIKOP_ERRORS_HPP
