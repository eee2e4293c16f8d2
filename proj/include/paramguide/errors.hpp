#pragma once

#include <stdexcept>
#include <string>

namespace paramguide {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParameterError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct AccuracyError : Error { using Error::Error; };
struct TruncationError : Error { using Error::Error; };
struct RegimeError : Error { using Error::Error; };
struct UnsupportedError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace paramguide
