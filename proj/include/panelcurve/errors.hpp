#pragma once

#include <stdexcept>
#include <string>

namespace panelcurve {

// Error taxonomy maps onto CLI exit codes: config=2, data=3, numeric=4.
class Error : public std::runtime_error {
public:
    enum class Kind { config, data, numeric, usage };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(Kind::config, what) {}
};

// Bad input data: malformed CSV, unparseable periods, spans too short, holes
// where a filter needs contiguous values.
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(Kind::data, what) {}
};

// Numerical failures: rank deficiency, infeasible variance-component
// estimation, domain errors in transforms.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(Kind::numeric, what) {}
};

// API contract violations (mismatched results passed to a test, empty
// coefficient subsets). These indicate caller bugs, not bad data.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(Kind::usage, what) {}
};

} // namespace panelcurve
