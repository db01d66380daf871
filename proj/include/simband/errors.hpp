#pragma once

#include <stdexcept>
#include <string>

namespace simband {

/// Base class for all simband failures.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or argument shapes (bad flag values, dimension
/// mismatches, out-of-range settings). CLI exit code 2.
struct config_error : error {
    using error::error;
};

/// Problems with input data content (missing files/columns, duplicate
/// timestamps, empty datasets). CLI exit code 3.
struct data_error : error {
    using error::error;
};

/// Numerical failure (singular systems, non-finite values). CLI exit code 4.
struct numeric_error : error {
    using error::error;
};

} // namespace simband
