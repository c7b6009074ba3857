#ifndef CPN_ERRORS_HPP
#define CPN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cpn {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A raw course code does not match "<letters> <token>".
class MalformedCodeError : public Error {
public:
    using Error::Error;
};

// A prerequisite clause violates the clause grammar.
class ClauseSyntaxError : public Error {
public:
    using Error::Error;
};

// Fatal condition while parsing catalogue text (attribute line before any
// course heading, duplicate course code).
class ParseError : public Error {
public:
    ParseError(int line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Structured interchange document violates the schema.
class SchemaViolationError : public Error {
public:
    using Error::Error;
};

// A referenced course code has no record and the policy forbids it.
class DanglingCodeError : public Error {
public:
    using Error::Error;
};

// In directed corequisite mode, a pair where zero or both titles match the
// lab markers cannot be oriented automatically.
class UnresolvableCorequisiteError : public Error {
public:
    using Error::Error;
};

// Elementary-cycle enumeration exceeded the configured cap.
class CycleLimitError : public Error {
public:
    using Error::Error;
};

// A topological order was requested on a cyclic graph.
class NotADagError : public Error {
public:
    using Error::Error;
};

// A component has no ordered pair connected by a finite directed path.
class NoReachablePairsError : public Error {
public:
    using Error::Error;
};

// Rank correlation is undefined (a constant input sequence).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

// Role classification was handed a node without metrics.
class MissingMetricsError : public Error {
public:
    using Error::Error;
};

// An export option demands metrics or roles that were not supplied.
class MissingDataError : public Error {
public:
    using Error::Error;
};

}  // namespace cpn

#endif
