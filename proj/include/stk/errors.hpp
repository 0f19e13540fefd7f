#ifndef STK_ERRORS_HPP
#define STK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stk {

// Error categories map 1:1 onto CLI exit codes (see tools/):
//   ParseError -> 2, PreconditionError -> 3, BoundError -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input files (bad JSON, wrong key, out-of-range index).
struct ParseError : Error {
    using Error::Error;
};

// A documented operation precondition does not hold.
struct PreconditionError : Error {
    using Error::Error;
};

// A configurable size bound was exceeded.
struct BoundError : Error {
    using Error::Error;
};

}  // namespace stk

#endif
