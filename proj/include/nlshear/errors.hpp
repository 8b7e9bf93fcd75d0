// errors.hpp

#ifndef NLSHEAR_ERRORS_HPP
#define NLSHEAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlshear {

/// Raised when a computation produces or receives non-finite values, or when
/// a numerical policy (floor, imaginary residue) is violated in strict mode.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration (scenario files, overrides, sweep specs).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nlshear

#endif
