#include "gstein/gheat.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace gstein {

SolveConfig::SolveConfig(const Grid& g, BoundaryRule b, double cfl)
    : grid(g), boundary(b), cfl_safety(cfl) {
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
        throw config_error("SolveConfig: cfl_safety must be in (0, 1]");
}

SolveConfig SolveConfig::defaults(const GParams& p, double dx, double x_half, double t_max,
                                  double cfl_safety) {
    if (!(dx > 0.0) || !(x_half > 0.0) || !(t_max > 0.0))
        throw config_error("SolveConfig::defaults: dx, x_half, t_max must be positive");
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
        throw config_error("SolveConfig::defaults: cfl_safety must be in (0, 1]");
    const int nx = static_cast<int>(std::lround(2.0 * x_half / dx));
    const double dxe = 2.0 * x_half / nx;
    const double shi2 = std::max(p.sigma_hi * p.sigma_hi, 1e-300);
    long steps_per_unit = static_cast<long>(std::ceil(shi2 / (cfl_safety * dxe * dxe)));
    steps_per_unit = 4 * ((steps_per_unit + 3) / 4);
    const double dt = 1.0 / static_cast<double>(steps_per_unit);
    const long n_t = static_cast<long>(std::ceil(t_max * steps_per_unit - 1e-9));
    Grid g(-x_half, x_half, nx, n_t * dt, dt);
    return SolveConfig(g, BoundaryRule::freeze, cfl_safety);
}

namespace {

// boundary fix-up for linear_extrapolate: the cells adjacent to the
// boundary reuse the neighboring interior second difference, then the
// boundary nodes are extrapolated from the two cells inside
void extrapolate_fixup(const std::vector<double>& u_in, std::vector<double>& u_out, int n,
                       double lam_lo, double lam_hi) {
    auto upd = [&](int i, double d2) {
        const double pos = d2 > 0.0 ? d2 : 0.0;
        const double neg = d2 < 0.0 ? d2 : 0.0;
        u_out[i] = u_in[i] + lam_hi * pos + lam_lo * neg;
    };
    upd(1, u_in[3] - 2.0 * u_in[2] + u_in[1]);
    upd(n - 2, u_in[n - 2] - 2.0 * u_in[n - 3] + u_in[n - 4]);
    u_out[0] = 2.0 * u_out[1] - u_out[2];
    u_out[n - 1] = 2.0 * u_out[n - 2] - u_out[n - 3];
}

} // namespace

ScalarField solve_g_heat(const TestFunction& phi, const GParams& p, const SolveConfig& cfg) {
    const Grid& g = cfg.grid;
    g.require_cfl(p);
    const int n = g.n_nodes();
    const int n_steps = g.n_steps();
    if (n_steps < 1) throw config_error("solve_g_heat: grid has no time steps");

    std::vector<double> u(n);
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
        u[i] = phi.f(g.node(i));
        sup = std::max(sup, std::abs(u[i]));
    }
    if (!(sup <= cfg.data_cap))
        throw numeric_error("solve_g_heat: initial data sup-norm " + std::to_string(sup) +
                            " exceeds cap " + std::to_string(cfg.data_cap));

    const double dxv = g.dx();
    const double lam_lo = g.dt * p.sigma_lo * p.sigma_lo / (2.0 * dxv * dxv);
    const double lam_hi = g.dt * p.sigma_hi * p.sigma_hi / (2.0 * dxv * dxv);

    const int max_rows = std::max(2, cfg.max_stored_rows);
    int stride = std::max(1, (n_steps + max_rows - 2) / (max_rows - 1));
    // prefer a stride dividing the steps-per-unit-time so whole times land
    // exactly on stored rows
    const long spu = std::lround(1.0 / g.dt);
    if (spu > 0 && std::abs(spu * g.dt - 1.0) < 1e-9) {
        for (int s = stride; s <= 4 * stride && s <= n_steps; ++s)
            if (spu % s == 0) {
                stride = s;
                break;
            }
    }

    ScalarField field(g);
    field.boundary = cfg.boundary;
    field.stride = stride;
    field.times.push_back(0.0);
    field.rows.push_back(u);

    std::vector<double> v(n);
    for (int s = 1; s <= n_steps; ++s) {
        kernels::heat_step(u.data(), v.data(), n, lam_lo, lam_hi, cfg.exec);
        if (cfg.boundary == BoundaryRule::linear_extrapolate)
            extrapolate_fixup(u, v, n, lam_lo, lam_hi);
        u.swap(v);
        if (s % stride == 0 || s == n_steps) {
            field.times.push_back(s * g.dt);
            field.rows.push_back(u);
        }
    }
    return field;
}

double g_expectation(const TestFunction& phi, double t, double x, const GParams& p,
                     const SolveConfig& cfg) {
    if (t < 0.0 || t > cfg.grid.t_max + 1e-12)
        throw config_error("g_expectation: t outside [0, t_max]");
    if (x < cfg.grid.x_min || x > cfg.grid.x_max)
        throw config_error("g_expectation: x outside the grid");
    const ScalarField field = solve_g_heat(phi, p, cfg);
    return field.value(t, x);
}

double time_derivative(const ScalarField& field, double t, double x) {
    const double h = field.stored_dt();
    if (t - h < -1e-12 || t + h > field.times.back() + 1e-12)
        throw config_error("time_derivative: probe too close to the time boundary");
    return (field.value(t + h, x) - field.value(t - h, x)) / (2.0 * h);
}

double space_derivative(const ScalarField& field, double t, double x) {
    const double h = field.grid.dx();
    if (x - h < field.grid.x_min - 1e-12 || x + h > field.grid.x_max + 1e-12)
        throw config_error("space_derivative: probe too close to the lateral boundary");
    return (field.value(t, x + h) - field.value(t, x - h)) / (2.0 * h);
}

double second_space_derivative(const ScalarField& field, double t, double x) {
    const double h = field.grid.dx();
    if (x - h < field.grid.x_min - 1e-12 || x + h > field.grid.x_max + 1e-12)
        throw config_error("second_space_derivative: probe too close to the lateral boundary");
    return (field.value(t, x + h) - 2.0 * field.value(t, x) + field.value(t, x - h)) / (h * h);
}

void write_field_csv(const ScalarField& field, std::ostream& out, int stride) {
    if (stride < 1) throw config_error("write_field_csv: stride must be >= 1");
    char buf[64];
    out << "t";
    for (int i = 0; i < field.grid.n_nodes(); ++i) {
        std::snprintf(buf, sizeof buf, ",%.17g", field.grid.node(i));
        out << buf;
    }
    out << "\n";
    auto emit = [&](std::size_t r) {
        std::snprintf(buf, sizeof buf, "%.17g", field.times[r]);
        out << buf;
        for (double vv : field.rows[r]) {
            std::snprintf(buf, sizeof buf, ",%.17g", vv);
            out << buf;
        }
        out << "\n";
    };
    const std::size_t last = field.rows.size() - 1;
    for (std::size_t r = 0; r < field.rows.size(); r += stride) emit(r);
    if (last % stride != 0) emit(last);
}

} // namespace gstein
