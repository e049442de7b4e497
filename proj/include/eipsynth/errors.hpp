#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eipsynth {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(line == 0 ? what
                          : what + " (line " + std::to_string(line) + ", column " +
                                std::to_string(column) + ")"),
          line_(line), column_(column)
    {
    }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class UnsupportedConstruct : public Error {
public:
    explicit UnsupportedConstruct(const std::string& construct)
        : Error("unsupported construct: " + construct), construct_(construct)
    {
    }

    const std::string& construct() const noexcept { return construct_; }

private:
    std::string construct_;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

class InvalidHint : public Error {
public:
    using Error::Error;
};

/// A message a pattern stage cannot process; run_chain diverts it to the dead-letter channel.
class RoutingError : public Error {
public:
    using Error::Error;
};

/// Chain or harness misconfiguration detected before any message flows.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

class UnsatisfiableAdaptation : public Error {
public:
    UnsatisfiableAdaptation(const std::string& leaf, const std::string& detail)
        : Error("unsatisfiable adaptation: no source for " + leaf + (detail.empty() ? "" : " (" + detail + ")")),
          leaf_(leaf)
    {
    }

    const std::string& leaf() const noexcept { return leaf_; }

private:
    std::string leaf_;
};

class AmbiguityError : public Error {
public:
    using Error::Error;
};

class NoInteraction : public Error {
public:
    using Error::Error;
};

class WiringError : public Error {
public:
    using Error::Error;
};

class AnalysisError : public Error {
public:
    using Error::Error;
};

} // namespace eipsynth
