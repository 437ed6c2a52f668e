#pragma once

#include <stdexcept>
#include <string>

namespace statgeo {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expression text did not parse; offset is the byte position of the problem.
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t at)
        : Error(msg + " (at byte " + std::to_string(at) + ")"), offset(at) {}
};

// Evaluation hit a domain problem (log/sqrt of a nonpositive value, division
// by zero, fractional power of a nonpositive base).
struct EvalError : Error {
    using Error::Error;
};

// Metric could not be inverted reliably at some point.
struct SingularMetricError : Error {
    using Error::Error;
};

// Immersion frame construction failed (rank deficiency, bad declared normal).
struct FrameError : Error {
    using Error::Error;
};

// Scenario document violates the schema; `path` names the offending field.
struct SchemaError : Error {
    std::string path;
    SchemaError(const std::string& where, const std::string& msg)
        : Error(where + ": " + msg), path(where) {}
};

} // namespace statgeo
