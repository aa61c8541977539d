#pragma once

#include <stdexcept>
#include <string>

namespace resbench {

/// Caller broke a precondition (dimension mismatch, out-of-range argument).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a usable result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An error metric is undefined for the given signals (zero variance, zero
/// range, zero denominator).
class UndefinedMetric : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Configuration or input-file problem; `key()` names the offending entry.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& what)
        : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(std::move(key))
    {
    }
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace resbench
