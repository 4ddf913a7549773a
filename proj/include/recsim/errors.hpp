#pragma once

#include <stdexcept>
#include <string>

namespace recsim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration / scenario validation problems (CLI exit 2).
struct ConfigError : Error {
    using Error::Error;
};

// Population file could not be ingested.
struct LoadError : Error {
    using Error::Error;
};

// rho * n is not a whole number.
struct RhoNotIntegral : Error {
    using Error::Error;
};

// Argument outside a function's mathematical domain.
struct DomainError : Error {
    using Error::Error;
};

}  // namespace recsim
