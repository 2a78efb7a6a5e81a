#pragma once

#include <stdexcept>
#include <string>

namespace scri {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain (z <= 0, pole of Gamma, ...).
class domain_error : public error {
public:
    using error::error;
};

// Result not representable (overflow of a dominant solution, order too large).
class range_error : public error {
public:
    using error::error;
};

// Requested accuracy unreachable; carries the achieved estimate.
class precision_error : public error {
public:
    precision_error(const std::string& msg, double achieved)
        : error(msg + " (achieved ~" + std::to_string(achieved) + ")"),
          achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

// Invalid run configuration (bad medium/route pairing, resolution caps, ...).
class config_error : public error {
public:
    using error::error;
};

// Linear solve failed or matrix effectively singular; carries the condition estimate.
class solve_error : public error {
public:
    solve_error(const std::string& msg, double condition_estimate)
        : error(msg + " (condition estimate " + std::to_string(condition_estimate) + ")"),
          cond_(condition_estimate) {}
    double condition_estimate() const { return cond_; }

private:
    double cond_;
};

// Memory estimate above the configured cap; raised before allocation.
class resource_error : public error {
public:
    using error::error;
};

// Filesystem failures, surfaced with the offending path.
class io_error : public error {
public:
    using error::error;
};

}  // namespace scri
