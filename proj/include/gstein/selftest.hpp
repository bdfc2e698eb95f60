#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gstein/gcore.hpp"
#include "gstein/kernels.hpp"

namespace gstein {

struct SuiteResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;      // largest violation or residual seen
    std::string detail;
};

/// Runs every invariant suite at the given (reduced) resolution.  In a
/// degenerate band the classical 1e-3 thresholds apply throughout.
std::vector<SuiteResult> run_selftest(const GParams& p, double dx, double x_half,
                                      std::uint64_t seed, long mc_paths, kernels::Exec exec);

} // namespace gstein
