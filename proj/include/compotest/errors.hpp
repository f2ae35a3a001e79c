#pragma once

#include <stdexcept>
#include <string>

namespace compotest {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotComposableError : Error {
    using Error::Error;
};

struct AlphabetMismatchError : Error {
    using Error::Error;
};

struct NotInputEnabledError : Error {
    using Error::Error;
};

struct UnknownInputError : Error {
    using Error::Error;
};

struct EmptyStateSetError : Error {
    using Error::Error;
};

// A directed generation script asked for a step that is not available at the
// current tracker set.
struct DirectedInfeasibleError : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& what, int line_, int column_)
        : Error(what + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
};

} // namespace compotest
