#pragma once

#include <stdexcept>

namespace gstein {

/// Structurally invalid inputs or configuration (bad band, bad grid shape,
/// unknown function name, malformed file).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violation of a numerical contract: CFL bound, data cap, mass leakage,
/// overflow of an ODE integration.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gstein
