#ifndef ROADFIELD_ERRORS_HPP
#define ROADFIELD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace roadfield {

/// A solver or scheme failed (bracket not found, instability detected, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration text could not be parsed or holds an out-of-range value.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& msg, int line_ = 0, std::string key_ = {})
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
          line(line_),
          key(std::move(key_)) {}

    int line;
    std::string key;
};

}  // namespace roadfield

#endif
