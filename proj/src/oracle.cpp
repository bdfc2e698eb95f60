#include "gstein/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gstein {

LatticeConfig::LatticeConfig(int n_steps_, double xmin, double xmax, int nx_)
    : n_steps(n_steps_), x_min(xmin), x_max(xmax), nx(nx_) {
    if (n_steps < 1) throw config_error("LatticeConfig: need n_steps >= 1");
    if (!(x_min < 0.0) || !(x_max > 0.0)) throw config_error("LatticeConfig: need x_min < 0 < x_max");
    if (nx < 2) throw config_error("LatticeConfig: need nx >= 2");
}

void LatticeConfig::validate(const GParams& p) const {
    p.require_nondegenerate_lo("LatticeConfig");
    const double cap = p.sigma_lo * std::sqrt(1.0 / n_steps);
    if (dx() > cap * (1.0 + 1e-12))
        throw numeric_error("LatticeConfig: lattice too coarse, dx = " + std::to_string(dx()) +
                            " > sigma_lo*sqrt(1/n_steps) = " + std::to_string(cap));
}

LatticeConfig LatticeConfig::defaults(const GParams& p, int n_steps, double x_half) {
    p.require_nondegenerate_lo("LatticeConfig::defaults");
    const double target = 0.25 * p.sigma_lo * std::sqrt(1.0 / n_steps);
    const int nx = static_cast<int>(std::ceil(2.0 * x_half / target));
    return LatticeConfig(n_steps, -x_half, x_half, nx + (nx % 2));
}

namespace {

// split a node-unit offset into whole cells + fraction
void split_offset(double off, int& k, double& th) {
    k = static_cast<int>(std::floor(off));
    th = off - k;
    if (th < 1e-13) th = 0.0;   // snap aligned offsets, keeps the two-point law exact
    if (th > 1.0 - 1e-13) {
        k += 1;
        th = 0.0;
    }
}

} // namespace

double tree_expectation(const TestFunction& phi, const GParams& p, const LatticeConfig& cfg,
                        kernels::Exec exec) {
    cfg.validate(p);
    const int n = cfg.nx + 1;
    const double dt = 1.0 / cfg.n_steps;
    const double step_lo = p.sigma_lo * std::sqrt(dt);
    const double step_hi = p.sigma_hi * std::sqrt(dt);

    // terminal induction step straight from phi, no interpolation
    std::vector<double> u(n), v(n);
    for (int i = 0; i < n; ++i) {
        const double x = cfg.node(i);
        const double lo = 0.5 * (phi.f(x + step_lo) + phi.f(x - step_lo));
        const double hi = 0.5 * (phi.f(x + step_hi) + phi.f(x - step_hi));
        u[i] = std::max(lo, hi);
    }

    int k_lo, k_hi;
    double th_lo, th_hi;
    split_offset(step_lo / cfg.dx(), k_lo, th_lo);
    split_offset(step_hi / cfg.dx(), k_hi, th_hi);

    for (int step = cfg.n_steps - 2; step >= 0; --step) {
        kernels::lattice_step(u.data(), v.data(), n, k_lo, th_lo, k_hi, th_hi, exec);
        u.swap(v);
    }

    // u now holds u_0 (or the terminal row when n_steps == 1)
    const double pos = (0.0 - cfg.x_min) / cfg.dx();
    const int i = std::clamp(static_cast<int>(std::floor(pos)), 0, cfg.nx - 1);
    const double th = pos - i;
    return u[i] * (1.0 - th) + u[i + 1] * th;
}

} // namespace gstein
