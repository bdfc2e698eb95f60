#pragma once

#include <functional>
#include <vector>

#include "gstein/common.hpp"

namespace gstein {

/// Volatility band [sigma_lo, sigma_hi] defining the generator
/// G(a) = (sigma_hi^2 a^+ - sigma_lo^2 a^-) / 2.
struct GParams {
    double sigma_lo;
    double sigma_hi;

    GParams(double lo, double hi);

    /// sigma_hi / sigma_lo; defined only for sigma_lo > 0.
    double beta() const;
    double sigma_mid() const { return 0.5 * (sigma_lo + sigma_hi); }
    bool degenerate() const { return sigma_lo == sigma_hi; }
    /// Throws config_error unless sigma_lo > 0.
    void require_nondegenerate_lo(const char* who) const;
};

/// G(a) = (sigma_hi^2 a^+ - sigma_lo^2 a^-) / 2, evaluated branchlessly
/// from the sign of a; a = 0 gives 0 under either branch.
double g_eval(double a, const GParams& p);

/// Unique a with g_eval(a, p) = c: 2c/sigma_hi^2 if c >= 0, else
/// 2c/sigma_lo^2.  Requires sigma_lo > 0 when c < 0.
double g_inverse(double c, const GParams& p);

/// Uniform space-time grid.  nx is the cell count (nx + 1 nodes);
/// dt is the time step.
struct Grid {
    double x_min;
    double x_max;
    int nx;
    double t_max;
    double dt;

    Grid(double x_min, double x_max, int nx, double t_max, double dt);

    double dx() const { return (x_max - x_min) / nx; }
    int n_nodes() const { return nx + 1; }
    double node(int i) const { return x_min + i * dx(); }
    int n_steps() const;
    /// Nearest node index, clamped to [0, nx].
    int nearest_node(double x) const;
    /// Monotonicity bound dt * sigma_hi^2 / dx^2 <= 1 for the explicit
    /// schemes; throws numeric_error if violated.
    void require_cfl(const GParams& p) const;
};

/// Lateral boundary handling for the marches.
enum class BoundaryRule { freeze, linear_extrapolate };

/// Solution of a march on a Grid.  Time levels are stored with a uniform
/// stride (plus the final level); queries interpolate bilinearly.
struct ScalarField {
    Grid grid;
    BoundaryRule boundary = BoundaryRule::freeze;
    int stride = 1;                         // march levels per stored row
    std::vector<double> times;              // stored level times, ascending
    std::vector<std::vector<double>> rows;  // rows[r][i], one row per stored time

    explicit ScalarField(const Grid& g) : grid(g) {}

    const std::vector<double>& initial_row() const { return rows.front(); }
    const std::vector<double>& final_row() const { return rows.back(); }

    /// Bilinear interpolation at (t, x); throws config_error outside the domain.
    double value(double t, double x) const;
    /// Full spatial row at time t, linearly interpolated between stored rows.
    std::vector<double> row_at_time(double t) const;
    /// Spacing between stored time levels.
    double stored_dt() const;
    double max_abs() const;
    double initial_max_abs() const;
};

/// Discrete probability measure: strictly increasing support points,
/// nonnegative weights summing to 1 within 1e-12.
struct Measure {
    std::vector<double> points;
    std::vector<double> weights;

    Measure(std::vector<double> pts, std::vector<double> w);

    std::size_t size() const { return points.size(); }
    double mean() const;
    double variance() const;
    /// Total weight at |x| > threshold.
    double tail_mass(double threshold) const;
};

/// Sum of weights_i * f(points_i).
double measure_expectation(const Measure& m, const std::function<double(double)>& f);

/// N(0, sigma^2) discretized by midpoint quadrature on
/// [-half_width_sigmas*sigma, +half_width_sigmas*sigma], renormalized.
Measure gaussian_measure(double sigma, double half_width_sigmas = 8.0, int n_points = 4001);

} // namespace gstein
