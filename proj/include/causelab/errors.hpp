#pragma once

#include <stdexcept>
#include <string>

namespace causelab {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax error while reading model or formula text. Carries the 1-based
/// position of the offending token.
class parse_error : public error {
public:
    parse_error(const std::string& msg, int line, int column)
        : error(msg + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line(line),
          column(column) {}

    int line;
    int column;
};

/// A structurally invalid model was used where a valid one is required.
class model_error : public error {
public:
    using error::error;
};

/// Inputs that do not fit the model's signature: unknown variables,
/// out-of-domain values, malformed witnesses or rankings.
class input_error : public error {
public:
    using error::error;
};

/// The witness search space exceeds the configured ceiling. Raised before
/// any partial answer could be produced.
class guard_error : public error {
public:
    using error::error;
};

}  // namespace causelab
