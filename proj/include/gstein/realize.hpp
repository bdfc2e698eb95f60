#pragma once

#include <cstdint>
#include <optional>

#include "gstein/gheat.hpp"

namespace gstein {

/// Bang-bang volatility control on the march grid, stored as one packed
/// bit per (time level, node): set = sigma_hi branch.  Level n holds the
/// maximizer of the backward update from time n*dt to (n+1)*dt.
struct VolatilityPolicy {
    Grid grid;
    double sigma_lo = 0.0;
    double sigma_hi = 0.0;
    int n_levels = 0;
    int n_nodes = 0;
    int words_per_row = 0;
    std::vector<std::uint64_t> bits;

    explicit VolatilityPolicy(const Grid& g) : grid(g) {}

    bool hi_at(int level, int i) const;
    double sigma_at(int level, int i) const;
    const std::uint64_t* row(int level) const;
};

/// Extracts the maximizing control sigma*(t_n, x_i) = sigma_hi where the
/// scheme's central second difference is >= -tie_tol (u_xx units), else
/// sigma_lo, by re-running the backward march from the field's initial row.
/// tie_tol < 0 selects the default 1e-9 * sigma_hi^2 / dx^2.
VolatilityPolicy optimal_policy(const ScalarField& field, const GParams& p,
                                double tie_tol = -1.0,
                                kernels::Exec exec = kernels::Exec::openmp);

/// Law of the sigma*-controlled diffusion started at the node containing 0,
/// advanced to t_target by the exact discrete transpose of the backward
/// march (forward step k uses policy level N-1-k).  Conserves total weight;
/// throws numeric_error if the accumulated drift exceeds leak_tol.
Measure forward_measure(const VolatilityPolicy& policy, double t_target,
                        kernels::Exec exec = kernels::Exec::openmp, double leak_tol = 1e-8);

/// Euler-Maruyama paths dX = sigma*(t, X) dW with sigma* looked up at the
/// nearest grid node and the same reversed-level convention as
/// forward_measure; increments span time_stride march levels (0 = auto,
/// about 2048 substeps).  Deterministic given (seed, n_paths): path i
/// draws from its own counter-derived substream.  Returns the empirical
/// law binned to grid nodes.
Measure mc_forward_measure(const VolatilityPolicy& policy, double t_target, long n_paths,
                           std::uint64_t seed, int time_stride = 0,
                           kernels::Exec exec = kernels::Exec::openmp);

struct RealizationResult {
    Measure measure;
    VolatilityPolicy policy;
    double n_g = 0.0;      // u(1, 0) from the backward solve
    double mu_phi = 0.0;   // measure expectation of phi
    double gap = 0.0;      // |mu_phi - n_g|
    std::optional<Measure> mc_measure;
    double mc_gap = 0.0;   // |mc[phi] - measure[phi]| when MC was run
};

/// solve_g_heat -> optimal_policy -> forward_measure (+ optional MC
/// cross-check with mc_paths > 0).  Requires grid.t_max >= 1.
RealizationResult realize(const TestFunction& phi, const GParams& p, const SolveConfig& cfg,
                          long mc_paths = 0, std::uint64_t seed = 0);

} // namespace gstein
