#include "gstein/kernels.hpp"

#include <algorithm>

namespace gstein::kernels {

namespace {

inline double cell_update(const double* u, int i, double lam_lo, double lam_hi) {
    const double d2 = u[i + 1] - 2.0 * u[i] + u[i - 1];
    const double pos = d2 > 0.0 ? d2 : 0.0;
    const double neg = d2 < 0.0 ? d2 : 0.0;
    return u[i] + lam_hi * pos + lam_lo * neg;
}

inline double interp_clamped(const double* u, int n, int base, int k, double th) {
    int j = base + k;
    if (j < 0) return u[0];
    if (j >= n - 1) return u[n - 1];
    return u[j] * (1.0 - th) + u[j + 1] * th;
}

} // namespace

bool bit_at(const std::uint64_t* bits, int i) {
    return (bits[i >> 6] >> (i & 63)) & 1u;
}

void heat_step(const double* u_in, double* u_out, int n, double lam_lo, double lam_hi,
               Exec exec) {
    if (exec == Exec::serial) {
        for (int i = 1; i < n - 1; ++i) u_out[i] = cell_update(u_in, i, lam_lo, lam_hi);
    } else {
#pragma omp parallel for schedule(static)
        for (int i = 1; i < n - 1; ++i) u_out[i] = cell_update(u_in, i, lam_lo, lam_hi);
    }
    u_out[0] = u_in[0];
    u_out[n - 1] = u_in[n - 1];
}

namespace {

// One 64-node chunk: updates values and builds the word of policy bits.
// Word granularity keeps the bit writes race-free under openmp.
inline void policy_chunk(const double* u_in, double* u_out, std::uint64_t* bits, double tie_raw,
                         int n, double lam_lo, double lam_hi, int w) {
    const int i0 = w << 6;
    const int i1 = std::min(i0 + 64, n);
    std::uint64_t word = 0;
    for (int i = i0; i < i1; ++i) {
        double d2 = 0.0;
        if (i >= 1 && i < n - 1) {
            d2 = u_in[i + 1] - 2.0 * u_in[i] + u_in[i - 1];
            const double pos = d2 > 0.0 ? d2 : 0.0;
            const double neg = d2 < 0.0 ? d2 : 0.0;
            u_out[i] = u_in[i] + lam_hi * pos + lam_lo * neg;
        } else {
            u_out[i] = u_in[i];
        }
        if (d2 >= -tie_raw) word |= std::uint64_t{1} << (i - i0);
    }
    bits[w] = word;
}

} // namespace

void heat_step_policy(const double* u_in, double* u_out, std::uint64_t* bits, double tie_raw,
                      int n, double lam_lo, double lam_hi, Exec exec) {
    const int n_words = (n + 63) / 64;
    if (exec == Exec::serial) {
        for (int w = 0; w < n_words; ++w)
            policy_chunk(u_in, u_out, bits, tie_raw, n, lam_lo, lam_hi, w);
    } else {
#pragma omp parallel for schedule(static)
        for (int w = 0; w < n_words; ++w)
            policy_chunk(u_in, u_out, bits, tie_raw, n, lam_lo, lam_hi, w);
    }
}

namespace {

inline double coeff(const std::uint64_t* bits, int j, int n, double lam_lo, double lam_hi) {
    if (j == 0 || j == n - 1) return 0.0;   // frozen rows do not diffuse
    return bit_at(bits, j) ? lam_hi : lam_lo;
}

inline double adjoint_cell(const double* w, const std::uint64_t* bits, int j, int n,
                           double lam_lo, double lam_hi) {
    const double cm = coeff(bits, j - 1, n, lam_lo, lam_hi);
    const double c0 = coeff(bits, j, n, lam_lo, lam_hi);
    const double cp = coeff(bits, j + 1, n, lam_lo, lam_hi);
    return w[j] + cp * w[j + 1] - 2.0 * c0 * w[j] + cm * w[j - 1];
}

} // namespace

void adjoint_step(const double* w_in, double* w_out, const std::uint64_t* bits, int n,
                  double lam_lo, double lam_hi, Exec exec) {
    if (exec == Exec::serial) {
        for (int j = 1; j < n - 1; ++j)
            w_out[j] = adjoint_cell(w_in, bits, j, n, lam_lo, lam_hi);
    } else {
#pragma omp parallel for schedule(static)
        for (int j = 1; j < n - 1; ++j)
            w_out[j] = adjoint_cell(w_in, bits, j, n, lam_lo, lam_hi);
    }
    w_out[0] = w_in[0] + coeff(bits, 1, n, lam_lo, lam_hi) * w_in[1];
    w_out[n - 1] = w_in[n - 1] + coeff(bits, n - 2, n, lam_lo, lam_hi) * w_in[n - 2];
}

void lattice_step(const double* u_in, double* u_out, int n, int k_lo, double th_lo, int k_hi,
                  double th_hi, Exec exec) {
    auto cell = [=](int i) {
        const double lo = 0.5 * (interp_clamped(u_in, n, i, k_lo, th_lo) +
                                 interp_clamped(u_in, n, i, -k_lo - (th_lo > 0.0 ? 1 : 0),
                                                th_lo > 0.0 ? 1.0 - th_lo : 0.0));
        const double hi = 0.5 * (interp_clamped(u_in, n, i, k_hi, th_hi) +
                                 interp_clamped(u_in, n, i, -k_hi - (th_hi > 0.0 ? 1 : 0),
                                                th_hi > 0.0 ? 1.0 - th_hi : 0.0));
        return lo > hi ? lo : hi;
    };
    if (exec == Exec::serial) {
        for (int i = 0; i < n; ++i) u_out[i] = cell(i);
    } else {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) u_out[i] = cell(i);
    }
}

} // namespace gstein::kernels
