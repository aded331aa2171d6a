#ifndef FACTCHECK_ERRORS_HPP
#define FACTCHECK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace factcheck {

// Base for all engine errors. Recoverable data problems (malformed
// records, unanswered oracle lookups, ...) are reported through the
// per-operation report structs instead of being thrown.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class UnknownPredicateError : public Error {
public:
    explicit UnknownPredicateError(const std::string& predicate)
        : Error("unknown predicate: " + predicate), predicate_(predicate) {}
    const std::string& predicate() const { return predicate_; }

private:
    std::string predicate_;
};

// Rule file problem with a source position attached.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class FixtureParseError : public Error {
public:
    using Error::Error;
};

class InsufficientCandidatesError : public Error {
public:
    InsufficientCandidatesError(const std::string& what, std::size_t available)
        : Error(what), available_(available) {}
    std::size_t available() const { return available_; }

private:
    std::size_t available_ = 0;
};

class SearchBoundExceededError : public Error {
public:
    SearchBoundExceededError(std::size_t atoms, std::size_t bound)
        : Error("exact search bound exceeded: " + std::to_string(atoms) +
                " decision atoms > bound " + std::to_string(bound)),
          atoms_(atoms), bound_(bound) {}
    std::size_t atoms() const { return atoms_; }
    std::size_t bound() const { return bound_; }

private:
    std::size_t atoms_;
    std::size_t bound_;
};

}  // namespace factcheck

#endif
