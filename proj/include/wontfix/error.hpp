#pragma once

#include <stdexcept>
#include <string>

namespace wontfix {

// Root of every exception thrown by the library. Subsystems derive their own
// error types from it so callers can catch per module or all at once.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised for problems with input data (as opposed to usage or I/O transport).
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace wontfix
