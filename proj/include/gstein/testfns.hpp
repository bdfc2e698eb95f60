#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "gstein/gcore.hpp"

namespace gstein {

enum class FnKind { phi_beta, cosine, gaussian_bump, smooth_clip_poly, tabulated };

/// Sample table of a function and its first two derivatives on a uniform grid.
struct TabulatedData {
    std::vector<double> xs;
    std::vector<double> f;
    std::vector<double> d1;
    std::vector<double> d2;
};

/// A C^2 test function with value/first/second derivative evaluators and a
/// reported sup norm.  Immutable after construction; evaluators are pure.
struct TestFunction {
    std::string name;
    FnKind kind = FnKind::tabulated;
    std::function<double(double)> f;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    double sup_norm = 0.0;
    std::shared_ptr<const TabulatedData> table;  // null for analytic kinds

    double operator()(double x) const { return f(x); }
};

/// The piecewise-cosine periodic eigenfunction: two cosine arcs per period,
/// branch lengths 2*pi/(1+beta) and 2*beta*pi/(1+beta), extended
/// 2*pi-periodically.  Requires sigma_lo > 0.
double phi_beta(double x, const GParams& p);
double phi_beta_d1(double x, const GParams& p);
double phi_beta_d2(double x, const GParams& p);

/// scale * phi_beta(x - shift) with exact derivatives (scale > 0).
TestFunction make_phi_beta(const GParams& p, double shift = 0.0, double scale = 1.0,
                           std::string name = "phi_beta");
TestFunction make_cosine();
TestFunction make_gaussian_bump();
/// exp(1 - 1/(1 - (x/half_width)^2)) on (-half_width, half_width), 0 outside.
TestFunction make_compact_bump(double half_width = 2.0);
/// Equals x^2 on [-L, L], constant outside [-(L+W), L+W], C^2 throughout
/// (cubic-Hermite taper of the first derivative on the transition bands).
TestFunction make_clip_quadratic(double L, double W, std::string name = "clip_quad");
/// Equals x on [-L, L], constant outside [-(L+W), L+W], C^2; a smoothed step.
TestFunction make_clip_linear(double L, double W, std::string name = "smooth_step");
TestFunction make_constant(double c);

/// The fixed 10-member verification battery.
std::vector<TestFunction> standard_battery(const GParams& p);

enum class EigenSign { plus, minus };
enum class EigenParity { even, odd };

/// Tabulated solution of the eigen-ODE  x/2 f' +- G(f'') = rho f  on
/// [-x_max, x_max], integrating f'' = g_inverse(+-(rho f - x/2 f')) outward
/// from (f, f')(0) = (1, 0) (even) or (0, 1) (odd) with a classical RK4
/// step h = 2 x_max / n (n even).  Throws numeric_error if |f| exceeds
/// overflow_cap.
TestFunction eigen_solve(double rho, EigenSign sign, const GParams& p, EigenParity parity,
                         double x_max, int n, double overflow_cap = 1e12);

/// Tabulated function from samples on a uniform grid; evaluates with cubic
/// Hermite interpolation on the stored (f, f') pair, the first derivative
/// with Hermite on (f', f''), and the second derivative by linear
/// interpolation of the stored f'' table.  Clamps outside the table.
TestFunction make_tabulated(std::string name, std::vector<double> xs, std::vector<double> f,
                            std::vector<double> d1, std::vector<double> d2);

/// CSV with header x,f,df,d2f.  Requires a tabulated function.
void write_tabulated_csv(const TestFunction& tf, std::ostream& out);
TestFunction read_tabulated_csv(std::istream& in, std::string name);

} // namespace gstein
