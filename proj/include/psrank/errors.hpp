#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psrank {

/// Invalid argument or configuration value.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input text. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Structurally invalid graph (self-loop, duplicate edge, out-of-range id).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A node has out-edges but its weights sum to zero.
class NormalizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the input graph was not met (e.g. weights not normalized).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Pearson correlation is undefined for the given vectors.
class CorrelationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace psrank
