#include "gstein/realize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gstein {

bool VolatilityPolicy::hi_at(int level, int i) const {
    return kernels::bit_at(row(level), i);
}

double VolatilityPolicy::sigma_at(int level, int i) const {
    return hi_at(level, i) ? sigma_hi : sigma_lo;
}

const std::uint64_t* VolatilityPolicy::row(int level) const {
    return bits.data() + static_cast<std::size_t>(level) * words_per_row;
}

VolatilityPolicy optimal_policy(const ScalarField& field, const GParams& p, double tie_tol,
                                kernels::Exec exec) {
    const Grid& g = field.grid;
    g.require_cfl(p);
    const int n = g.n_nodes();
    const int n_steps = g.n_steps();
    const double dxv = g.dx();
    if (tie_tol < 0.0) tie_tol = 1e-9 * p.sigma_hi * p.sigma_hi / (dxv * dxv);
    const double tie_raw = tie_tol * dxv * dxv;   // kernel compares raw differences

    const double lam_lo = g.dt * p.sigma_lo * p.sigma_lo / (2.0 * dxv * dxv);
    const double lam_hi = g.dt * p.sigma_hi * p.sigma_hi / (2.0 * dxv * dxv);

    VolatilityPolicy pol(g);
    pol.sigma_lo = p.sigma_lo;
    pol.sigma_hi = p.sigma_hi;
    pol.n_levels = n_steps;
    pol.n_nodes = n;
    pol.words_per_row = (n + 63) / 64;
    pol.bits.assign(static_cast<std::size_t>(n_steps) * pol.words_per_row, 0);

    // re-run the march that produced the field, recording the maximizing
    // branch of every update
    std::vector<double> u = field.initial_row(), v(n);
    for (int s = 0; s < n_steps; ++s) {
        std::uint64_t* row = pol.bits.data() + static_cast<std::size_t>(s) * pol.words_per_row;
        kernels::heat_step_policy(u.data(), v.data(), row, tie_raw, n, lam_lo, lam_hi, exec);
        if (field.boundary == BoundaryRule::linear_extrapolate) {
            // keep values consistent with the solve; edge-cell branch bits
            // follow the copied differences
            auto fix = [&](int i, double d2) {
                const double pos = d2 > 0.0 ? d2 : 0.0;
                const double neg = d2 < 0.0 ? d2 : 0.0;
                v[i] = u[i] + lam_hi * pos + lam_lo * neg;
                const std::uint64_t m = std::uint64_t{1} << (i & 63);
                if (d2 >= -tie_raw)
                    row[i >> 6] |= m;
                else
                    row[i >> 6] &= ~m;
            };
            fix(1, u[3] - 2.0 * u[2] + u[1]);
            fix(n - 2, u[n - 2] - 2.0 * u[n - 3] + u[n - 4]);
            v[0] = 2.0 * v[1] - v[2];
            v[n - 1] = 2.0 * v[n - 2] - v[n - 3];
        }
        u.swap(v);
    }
    return pol;
}

namespace {

int forward_steps(const VolatilityPolicy& pol, double t_target) {
    if (!(t_target > 0.0) || t_target > pol.grid.t_max + 1e-12)
        throw config_error("forward march: t_target outside (0, t_max]");
    const int n1 = static_cast<int>(std::llround(t_target / pol.grid.dt));
    if (n1 < 1 || n1 > pol.n_levels)
        throw config_error("forward march: t_target has no march level");
    return n1;
}

} // namespace

Measure forward_measure(const VolatilityPolicy& pol, double t_target, kernels::Exec exec,
                        double leak_tol) {
    const Grid& g = pol.grid;
    const int n = pol.n_nodes;
    const int n1 = forward_steps(pol, t_target);
    const double dxv = g.dx();
    const double lam_lo = g.dt * pol.sigma_lo * pol.sigma_lo / (2.0 * dxv * dxv);
    const double lam_hi = g.dt * pol.sigma_hi * pol.sigma_hi / (2.0 * dxv * dxv);

    std::vector<double> w(n, 0.0), w2(n);
    w[g.nearest_node(0.0)] = 1.0;
    for (int k = 0; k < n1; ++k) {
        kernels::adjoint_step(w.data(), w2.data(), pol.row(n1 - 1 - k), n, lam_lo, lam_hi, exec);
        w.swap(w2);
    }

    double sum = 0.0;
    for (double v : w) sum += v;
    if (std::abs(sum - 1.0) > leak_tol)
        throw numeric_error("forward_measure: mass drift " + std::to_string(sum - 1.0) +
                            " exceeds " + std::to_string(leak_tol));

    std::vector<double> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = g.node(i);
    return Measure(std::move(pts), std::move(w));
}

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

// splitmix64 stream; per-path states are derived by full avalanche of
// (seed, path index) so results are independent of scheduling
struct SplitMix64 {
    std::uint64_t s;
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        return mix64(s);
    }
    double u01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
};

struct NormalGen {
    SplitMix64 rng;
    bool have = false;
    double spare = 0.0;
    double next() {
        if (have) {
            have = false;
            return spare;
        }
        const double r = std::sqrt(-2.0 * std::log(rng.u01()));
        const double a = 6.283185307179586476925286766559 * rng.u01();
        spare = r * std::sin(a);
        have = true;
        return r * std::cos(a);
    }
};

} // namespace

Measure mc_forward_measure(const VolatilityPolicy& pol, double t_target, long n_paths,
                           std::uint64_t seed, int time_stride, kernels::Exec exec) {
    if (n_paths < 1) throw config_error("mc_forward_measure: need n_paths >= 1");
    const Grid& g = pol.grid;
    const int n = pol.n_nodes;
    const int n1 = forward_steps(pol, t_target);
    const int stride = time_stride > 0 ? time_stride : std::max(1, n1 / 2048);
    const double dt = g.dt;

    std::vector<long> counts(n, 0);
    auto run_path = [&](long path) {
        NormalGen gen{SplitMix64{mix64(seed ^ ((static_cast<std::uint64_t>(path) + 1) *
                                               0x9e3779b97f4a7c15ULL))}};
        double x = 0.0;
        int k = 0;
        while (k < n1) {
            const int m = std::min(stride, n1 - k);
            const double sig = pol.sigma_at(n1 - 1 - k, g.nearest_node(x));
            x += sig * std::sqrt(m * dt) * gen.next();
            k += m;
        }
        return g.nearest_node(x);
    };

    if (exec == kernels::Exec::serial) {
        for (long p = 0; p < n_paths; ++p) counts[run_path(p)]++;
    } else {
#pragma omp parallel for schedule(static)
        for (long p = 0; p < n_paths; ++p) {
            const int bin = run_path(p);
#pragma omp atomic
            counts[bin]++;
        }
    }

    std::vector<double> pts(n), w(n);
    for (int i = 0; i < n; ++i) {
        pts[i] = g.node(i);
        w[i] = static_cast<double>(counts[i]) / static_cast<double>(n_paths);
    }
    return Measure(std::move(pts), std::move(w));
}

RealizationResult realize(const TestFunction& phi, const GParams& p, const SolveConfig& cfg,
                          long mc_paths, std::uint64_t seed) {
    if (cfg.grid.t_max < 1.0 - 1e-12)
        throw config_error("realize: grid.t_max must reach t = 1");
    const ScalarField field = solve_g_heat(phi, p, cfg);
    VolatilityPolicy pol = optimal_policy(field, p, -1.0, cfg.exec);
    Measure mu = forward_measure(pol, 1.0, cfg.exec);

    RealizationResult out{std::move(mu), std::move(pol)};
    out.n_g = field.value(1.0, 0.0);
    out.mu_phi = measure_expectation(out.measure, phi.f);
    out.gap = std::abs(out.mu_phi - out.n_g);
    if (mc_paths > 0) {
        out.mc_measure = mc_forward_measure(out.policy, 1.0, mc_paths, seed, 0, cfg.exec);
        const double mc_phi = measure_expectation(*out.mc_measure, phi.f);
        out.mc_gap = std::abs(mc_phi - out.mu_phi);
    }
    return out;
}

} // namespace gstein
