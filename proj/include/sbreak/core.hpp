#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sbreak {

// Half-open index interval [lo, hi) over an observation sample.
struct Range {
    std::size_t lo = 0;
    std::size_t hi = 0;

    std::size_t length() const { return hi - lo; }
};

// Invalid configuration or argument; the message names the offending field.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A segment whose cross-products cannot identify the requested fit.
struct DegenerateSegmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Relative singular-value cutoff shared by all pseudo-inverse fallbacks.
inline constexpr double kPinvTolerance = 1e-12;

// Estimation route for split-sample criteria and stability statistics.
enum class Method { Ols, Ivx };

} // namespace sbreak
