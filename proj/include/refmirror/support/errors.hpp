#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "refmirror/lang/span.hpp"

namespace refmirror {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Raised by the lexer/parser on unbalanced structure or token-level violations.
class SyntaxError : public Error {
public:
    SyntaxError(lang::Span span, const std::string& message)
        : Error("syntax error at line " + std::to_string(span.start_line) + ": " + message),
          span_(span) {}

    const lang::Span& span() const { return span_; }

private:
    lang::Span span_;
};

class UnknownNodeError : public Error {
public:
    using Error::Error;
};

/// A refactoring instance references entities that do not exist in the unit.
class UnknownEntityError : public Error {
public:
    using Error::Error;
};

class UnsupportedKindError : public Error {
public:
    using Error::Error;
};

class KindMismatchError : public Error {
public:
    using Error::Error;
};

class EmptySetError : public Error {
public:
    using Error::Error;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class MissingFieldError : public Error {
public:
    using Error::Error;
};

/// A refactoring's preconditions do not hold; message lists the violated rules.
class PreconditionError : public Error {
public:
    PreconditionError(const std::string& message, std::vector<std::string> rules)
        : Error(message), rules_(std::move(rules)) {}

    const std::vector<std::string>& rules() const { return rules_; }

private:
    std::vector<std::string> rules_;
};

class NotInvertibleError : public Error {
public:
    using Error::Error;
};

class ProviderError : public Error {
public:
    using Error::Error;
};

class NoCodeInResponseError : public Error {
public:
    using Error::Error;
};

}  // namespace refmirror
