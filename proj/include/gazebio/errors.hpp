#pragma once

#include <stdexcept>
#include <string>

namespace gazebio {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input data violates a documented file format or invariant.
struct MalformedTrace : Error {
    explicit MalformedTrace(const std::string& what, long row = -1)
        : Error(row >= 0 ? what + " (row " + std::to_string(row) + ")" : what), row_index(row) {}
    long row_index;
};

struct MalformedEvents : Error {
    explicit MalformedEvents(const std::string& what, long row = -1)
        : Error(row >= 0 ? what + " (row " + std::to_string(row) + ")" : what), row_index(row) {}
    long row_index;
};

struct DegenerateFit : Error {
    using Error::Error;
};

struct EmptyMap : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct DegenerateMatrix : Error {
    using Error::Error;
};

struct DegenerateGroundTruth : Error {
    using Error::Error;
};

struct UndefinedDirection : Error {
    using Error::Error;
};

// Bad pipeline/CLI configuration (missing paths, out-of-range parameters).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace gazebio
