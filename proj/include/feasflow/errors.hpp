#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace feasflow {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// The delta-graph of a schedule is not strongly connected.
struct NotConnected : Error {
    using Error::Error;
};

/// A segment graph violates the balance condition.
struct NotBalanced : Error {
    using Error::Error;
};

/// Single-agent networks have no defined contraction constants.
struct DegenerateNetwork : Error {
    using Error::Error;
};

/// A multiplier left its box [0, cap] by more than tolerance.
struct OutOfBox : Error {
    using Error::Error;
};

/// A metric was requested on a trace recorded in an incompatible mode.
struct ModeMismatch : Error {
    using Error::Error;
};

struct UnknownPreset : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

/// Config validation failure; collects every violation with its field path.
struct ValidationError : Error {
    explicit ValidationError(std::vector<std::string> issues)
        : Error(join(issues)), issues(std::move(issues)) {}

    std::vector<std::string> issues;

  private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string msg = "config validation failed:";
        for (const auto& s : issues) {
            msg += "\n  - " + s;
        }
        return msg;
    }
};

/// A simulation produced a non-finite state and was aborted.
struct Interrupted : Error {
    Interrupted(const std::string& what, double t) : Error(what), blowup_time(t) {}
    double blowup_time;
};

}  // namespace feasflow
