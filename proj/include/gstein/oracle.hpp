#pragma once

#include "gstein/gcore.hpp"
#include "gstein/kernels.hpp"
#include "gstein/testfns.hpp"

namespace gstein {

/// Lattice for the discrete-time dynamic program.  The node spacing must
/// satisfy dx <= sigma_lo * sqrt(1/n_steps) so interpolation error stays
/// subdominant.
struct LatticeConfig {
    int n_steps;
    double x_min;
    double x_max;
    int nx;

    LatticeConfig(int n_steps, double x_min, double x_max, int nx);

    double dx() const { return (x_max - x_min) / nx; }
    double node(int i) const { return x_min + i * dx(); }
    void validate(const GParams& p) const;

    /// Spacing sigma_lo*sqrt(1/n_steps)/4; for rational sigma_hi/sigma_lo
    /// both increments then land on whole node offsets and the recursion is
    /// interpolation-free.
    static LatticeConfig defaults(const GParams& p, int n_steps = 400, double x_half = 10.0);
};

/// Backward induction u_k(x) = max over sigma in {lo, hi} of
/// (u_{k+1}(x + sigma sqrt(dt)) + u_{k+1}(x - sigma sqrt(dt))) / 2 with
/// dt = 1/n_steps and u_n = phi; returns u_0(0).  The terminal step
/// evaluates phi directly, later steps interpolate linearly.  An
/// approximation of the G-normal expectation built without the PDE stencil.
double tree_expectation(const TestFunction& phi, const GParams& p, const LatticeConfig& cfg,
                        kernels::Exec exec = kernels::Exec::openmp);

} // namespace gstein
