#pragma once

#include <cstdint>
#include <vector>

namespace gstein::kernels {

/// Execution mode for the data-parallel inner loops.  The serial variants
/// are the reference implementations; the openmp variants must produce
/// bit-identical results (pure per-cell maps, no reductions).
enum class Exec { serial, openmp };

/// One explicit monotone step of the backward (value) march on interior
/// nodes i in [1, n-2]:
///   u_out[i] = u_in[i] + lam_hi * max(d2, 0) + lam_lo * min(d2, 0),
/// d2 = u_in[i+1] - 2 u_in[i] + u_in[i-1], lam_* = dt * sigma_*^2 / (2 dx^2).
/// Boundary nodes are copied (freeze); callers adjust them afterwards for
/// other boundary rules.
void heat_step(const double* u_in, double* u_out, int n, double lam_lo, double lam_hi,
               Exec exec);

/// Same update, additionally recording the maximizing branch per node into
/// a packed bit row: bit i set iff d2 >= -tie_raw (sigma_hi branch).
/// bits must hold (n + 63) / 64 words; boundary node bits are set from
/// d2 = 0 (hi branch).
void heat_step_policy(const double* u_in, double* u_out, std::uint64_t* bits, double tie_raw,
                      int n, double lam_lo, double lam_hi, Exec exec);

/// One step of the forward (measure) march: the exact transpose of
/// heat_step with frozen boundary rows.  c_j = lam_hi or lam_lo by bit j,
/// with c_0 = c_{n-1} = 0:
///   w_out[j] = w[j] + c_{j+1} w_{j+1} - 2 c_j w_j + c_{j-1} w_{j-1}   (interior)
///   w_out[0] = w[0] + c_1 w_1,   w_out[n-1] = w[n-1] + c_{n-2} w_{n-2}.
/// Conserves the total weight exactly (mass reaching the ends is absorbed).
void adjoint_step(const double* w_in, double* w_out, const std::uint64_t* bits, int n,
                  double lam_lo, double lam_hi, Exec exec);

/// One backward-induction step of the two-point lattice recursion:
///   u_out[i] = max over s in {lo, hi} of (U(x_i + off_s) + U(x_i - off_s)) / 2
/// where U linearly interpolates u_in and clamps to the end values.
/// Offsets are given in node units: off = k + theta, 0 <= theta < 1.
void lattice_step(const double* u_in, double* u_out, int n, int k_lo, double th_lo, int k_hi,
                  double th_hi, Exec exec);

bool bit_at(const std::uint64_t* bits, int i);

} // namespace gstein::kernels
