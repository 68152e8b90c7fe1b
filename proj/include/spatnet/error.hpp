#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spatnet {

/// Input file does not match its documented format.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A precondition or data invariant was violated by the caller.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A metric is undefined for the given input (empty graph, zero variance, ...).
class UndefinedMetric : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace spatnet
