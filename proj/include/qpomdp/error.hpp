#pragma once

#include <stdexcept>
#include <string>

namespace qpomdp {

// Base for everything thrown on purpose. Anything else escaping the library
// is a bug and the CLI maps it to exit code 70.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data: malformed files, inconsistent models, unknown names.
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// Parse failure with a 1-based line number when one is known.
class ParseError : public InputError {
public:
    ParseError(const std::string& msg, int line)
        : InputError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// A resource cap was hit (support count, product size, oracle nodes, ...).
class CapError : public Error {
public:
    explicit CapError(const std::string& msg) : Error(msg) {}
};

// Wall-clock deadline exceeded; a cap, but callers sometimes want to tell
// the two apart (bench rows report "timeout" rather than "cap").
class DeadlineError : public CapError {
public:
    explicit DeadlineError(const std::string& msg) : CapError(msg) {}
};

// Internal invariant broke. Never expected; CLI exit 70.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

} // namespace qpomdp
