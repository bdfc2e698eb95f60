#pragma once

#include "gstein/gcore.hpp"
#include "gstein/kernels.hpp"
#include "gstein/testfns.hpp"

namespace gstein {

/// Configuration for the explicit monotone G-heat march.
struct SolveConfig {
    Grid grid;
    BoundaryRule boundary = BoundaryRule::freeze;
    double cfl_safety = 0.9;
    kernels::Exec exec = kernels::Exec::openmp;
    int max_stored_rows = 1025;   // time levels kept on the field
    double data_cap = 1e8;        // sup-norm cap on initial data

    SolveConfig(const Grid& g, BoundaryRule b = BoundaryRule::freeze, double cfl = 0.9);

    /// Standard grid: x in [-x_half, x_half] at spacing dx, time step
    /// dt = 1/S with S the smallest multiple of 4 with
    /// 1/S <= cfl_safety * dx^2 / sigma_hi^2, so whole times land exactly
    /// on march levels.  t_max is rounded up to a whole number of steps.
    static SolveConfig defaults(const GParams& p, double dx = 0.01, double x_half = 10.0,
                                double t_max = 1.25, double cfl_safety = 0.9);
};

/// Explicit monotone march for  u_t = G(u_xx), u(0,.) = phi:
///   u^{n+1}_i = u^n_i + dt * G((u^n_{i+1} - 2 u^n_i + u^n_{i-1}) / dx^2).
/// Monotone under the CFL bound, hence convergent to the viscosity
/// solution; obeys the discrete maximum principle.
ScalarField solve_g_heat(const TestFunction& phi, const GParams& p, const SolveConfig& cfg);

/// u^phi(t, x) by bilinear interpolation of a fresh solve.  The G-normal
/// expectation is g_expectation(phi, 1, 0, ...).
double g_expectation(const TestFunction& phi, double t, double x, const GParams& p,
                     const SolveConfig& cfg);

/// Centered finite-difference probes of a solved field.  (t, x) must sit
/// one probe step inside the stored domain.
double time_derivative(const ScalarField& field, double t, double x);
double space_derivative(const ScalarField& field, double t, double x);
double second_space_derivative(const ScalarField& field, double t, double x);

/// CSV dump: header row "t" followed by the x nodes, one row per stored
/// time level, thinned by stride.
void write_field_csv(const ScalarField& field, std::ostream& out, int stride = 1);

} // namespace gstein
