#pragma once

#include <stdexcept>
#include <string>

namespace harper {

/// Invalid user configuration. Always names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// A numerical invariant (norm, reality of an expectation value, entropy
/// bounds) was violated beyond tolerance during a run.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace harper
