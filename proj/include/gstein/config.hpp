#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "gstein/gheat.hpp"

namespace gstein {

/// One CLI run, fully specified.  Serializes to a canonical JSON form that
/// round-trips bit-identically.
struct RunConfig {
    double sigma_lo = 1.0;
    double sigma_hi = 2.0;
    double dx = 0.01;
    double x_half = 10.0;
    double t_max = 1.25;
    double dt = 0.0;            // 0 = derive from the CFL bound
    double cfl_safety = 0.9;
    std::string boundary = "freeze";
    std::string phi = "phi_beta";
    std::uint64_t seed = 1;
    long mc_paths = 0;
    int mc_stride = 0;          // 0 = auto
    int steps = 400;            // lattice oracle steps
    int stride = 1;             // field dump stride
    double tol_scale = 1.0;     // scales the grid-derived tolerances
    std::string exec = "openmp";
    std::string json_path;
    std::string out_path;
    std::string dump_grid;
    std::string in_dir;
    std::string out_dir;

    nlohmann::ordered_json to_json() const;
    static RunConfig from_json(const nlohmann::ordered_json& j);

    /// Throws config_error / numeric_error on invalid combinations.
    void validate() const;

    GParams gparams() const { return GParams(sigma_lo, sigma_hi); }
    kernels::Exec exec_mode() const;
    /// Solve configuration implied by the run (dt override honored).
    SolveConfig solve_config() const;
};

} // namespace gstein
