#include "gstein/testfns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace gstein {

namespace {

constexpr double kPi = std::numbers::pi;

struct PhiBetaParams {
    double a1, k1;       // first arc: a1 * cos(k1 * y)
    double a2, k2, c2;   // second arc: a2 * cos(k2 * y + c2)
    double x0;           // left end of the fundamental cell
    double xj;           // junction between the arcs
};

PhiBetaParams phi_beta_params(const GParams& p) {
    p.require_nondegenerate_lo("phi_beta");
    const double beta = p.beta();
    PhiBetaParams q;
    q.a1 = 2.0 / (1.0 + beta);
    q.k1 = 0.5 * (1.0 + beta);
    q.a2 = 2.0 * beta / (1.0 + beta);
    q.k2 = 0.5 * (1.0 + beta) / beta;
    q.c2 = 0.5 * (beta - 1.0) * kPi / beta;
    q.x0 = -kPi / (1.0 + beta);
    q.xj = kPi / (1.0 + beta);
    return q;
}

// reduce into the fundamental cell [x0, x0 + 2*pi)
double phi_beta_reduce(double x, const PhiBetaParams& q) {
    return x - 2.0 * kPi * std::floor((x - q.x0) / (2.0 * kPi));
}

} // namespace

double phi_beta(double x, const GParams& p) {
    const auto q = phi_beta_params(p);
    const double y = phi_beta_reduce(x, q);
    return (y < q.xj) ? q.a1 * std::cos(q.k1 * y) : q.a2 * std::cos(q.k2 * y + q.c2);
}

double phi_beta_d1(double x, const GParams& p) {
    const auto q = phi_beta_params(p);
    const double y = phi_beta_reduce(x, q);
    // a1*k1 = a2*k2 = 1, so both arcs have slope -sin(arg)
    return (y < q.xj) ? -std::sin(q.k1 * y) : -std::sin(q.k2 * y + q.c2);
}

double phi_beta_d2(double x, const GParams& p) {
    const auto q = phi_beta_params(p);
    const double y = phi_beta_reduce(x, q);
    return (y < q.xj) ? -q.k1 * std::cos(q.k1 * y) : -q.k2 * std::cos(q.k2 * y + q.c2);
}

TestFunction make_phi_beta(const GParams& p, double shift, double scale, std::string name) {
    if (!(scale > 0.0)) throw config_error("make_phi_beta: scale must be positive");
    const auto q = phi_beta_params(p);
    const GParams pc = p;
    TestFunction tf;
    tf.name = std::move(name);
    tf.kind = FnKind::phi_beta;
    tf.f = [pc, shift, scale](double x) { return scale * phi_beta(x - shift, pc); };
    tf.d1 = [pc, shift, scale](double x) { return scale * phi_beta_d1(x - shift, pc); };
    tf.d2 = [pc, shift, scale](double x) { return scale * phi_beta_d2(x - shift, pc); };
    tf.sup_norm = scale * q.a2;
    return tf;
}

TestFunction make_cosine() {
    TestFunction tf;
    tf.name = "cos";
    tf.kind = FnKind::cosine;
    tf.f = [](double x) { return std::cos(x); };
    tf.d1 = [](double x) { return -std::sin(x); };
    tf.d2 = [](double x) { return -std::cos(x); };
    tf.sup_norm = 1.0;
    return tf;
}

TestFunction make_gaussian_bump() {
    TestFunction tf;
    tf.name = "gaussian_bump";
    tf.kind = FnKind::gaussian_bump;
    tf.f = [](double x) { return std::exp(-0.5 * x * x); };
    tf.d1 = [](double x) { return -x * std::exp(-0.5 * x * x); };
    tf.d2 = [](double x) { return (x * x - 1.0) * std::exp(-0.5 * x * x); };
    tf.sup_norm = 1.0;
    return tf;
}

TestFunction make_compact_bump(double half_width) {
    if (!(half_width > 0.0)) throw config_error("make_compact_bump: half_width must be positive");
    const double w = half_width;
    TestFunction tf;
    tf.name = "compact_bump";
    tf.kind = FnKind::gaussian_bump;
    tf.f = [w](double x) {
        const double s = x / w, r = 1.0 - s * s;
        if (r < 1e-8) return 0.0;
        return std::exp(1.0 - 1.0 / r);
    };
    tf.d1 = [w](double x) {
        const double s = x / w, r = 1.0 - s * s;
        if (r < 1e-8) return 0.0;
        return std::exp(1.0 - 1.0 / r) * (-2.0 * s / (r * r)) / w;
    };
    tf.d2 = [w](double x) {
        const double s = x / w, r = 1.0 - s * s;
        if (r < 1e-8) return 0.0;
        const double g = -2.0 * s / (r * r);
        const double gp = -2.0 * (1.0 + 3.0 * s * s) / (r * r * r);
        return std::exp(1.0 - 1.0 / r) * (g * g + gp) / (w * w);
    };
    tf.sup_norm = 1.0;
    return tf;
}

namespace {

// Hermite basis on [0,1] and its antiderivatives, used by the clip tapers.
inline double h00(double t) { return (2.0 * t - 3.0) * t * t + 1.0; }
inline double h10(double t) { return ((t - 2.0) * t + 1.0) * t; }
inline double dh00(double t) { return 6.0 * t * (t - 1.0); }
inline double dh10(double t) { return (3.0 * t - 4.0) * t + 1.0; }
inline double H00(double t) { return ((0.5 * t - 1.0) * t * t + 1.0) * t; }
inline double H10(double t) { return ((0.25 * t - 2.0 / 3.0) * t + 0.5) * t * t; }

} // namespace

TestFunction make_clip_quadratic(double L, double W, std::string name) {
    if (!(L > 0.0) || !(W > 0.0)) throw config_error("make_clip_quadratic: need L, W > 0");
    const double K = L * L + W * (2.0 * L * 0.5 + 2.0 * W / 12.0);
    TestFunction tf;
    tf.name = std::move(name);
    tf.kind = FnKind::smooth_clip_poly;
    tf.f = [L, W, K](double x) {
        const double a = std::abs(x);
        if (a <= L) return x * x;
        if (a >= L + W) return K;
        const double t = (a - L) / W;
        return L * L + W * (2.0 * L * H00(t) + 2.0 * W * H10(t));
    };
    tf.d1 = [L, W](double x) {
        const double a = std::abs(x), s = x < 0.0 ? -1.0 : 1.0;
        if (a <= L) return 2.0 * x;
        if (a >= L + W) return 0.0;
        const double t = (a - L) / W;
        return s * (2.0 * L * h00(t) + 2.0 * W * h10(t));
    };
    tf.d2 = [L, W](double x) {
        const double a = std::abs(x);
        if (a <= L) return 2.0;
        if (a >= L + W) return 0.0;
        const double t = (a - L) / W;
        return (2.0 * L * dh00(t) + 2.0 * W * dh10(t)) / W;
    };
    tf.sup_norm = K;
    return tf;
}

TestFunction make_clip_linear(double L, double W, std::string name) {
    if (!(L > 0.0) || !(W > 0.0)) throw config_error("make_clip_linear: need L, W > 0");
    const double K = L + 0.5 * W;
    TestFunction tf;
    tf.name = std::move(name);
    tf.kind = FnKind::smooth_clip_poly;
    tf.f = [L, W, K](double x) {
        const double a = std::abs(x), s = x < 0.0 ? -1.0 : 1.0;
        if (a <= L) return x;
        if (a >= L + W) return s * K;
        const double t = (a - L) / W;
        return s * (L + W * H00(t));
    };
    tf.d1 = [L, W](double x) {
        const double a = std::abs(x);
        if (a <= L) return 1.0;
        if (a >= L + W) return 0.0;
        return h00((a - L) / W);
    };
    tf.d2 = [L, W](double x) {
        const double a = std::abs(x), s = x < 0.0 ? -1.0 : 1.0;
        if (a <= L || a >= L + W) return 0.0;
        return s * dh00((a - L) / W) / W;
    };
    tf.sup_norm = K;
    return tf;
}

TestFunction make_constant(double c) {
    TestFunction tf;
    tf.name = "const:" + std::to_string(c);
    tf.kind = FnKind::smooth_clip_poly;
    tf.f = [c](double) { return c; };
    tf.d1 = [](double) { return 0.0; };
    tf.d2 = [](double) { return 0.0; };
    tf.sup_norm = std::abs(c);
    return tf;
}

std::vector<TestFunction> standard_battery(const GParams& p) {
    std::vector<TestFunction> out;
    out.push_back(make_phi_beta(p));
    out.push_back(make_cosine());
    out.push_back(make_phi_beta(p, 0.7, 1.0, "phi_beta_shift1"));
    out.push_back(make_phi_beta(p, -1.3, 1.0, "phi_beta_shift2"));
    out.push_back(make_phi_beta(p, 2.1, 0.5, "phi_beta_shift3"));
    out.push_back(make_phi_beta(p, 0.0, 1.5, "phi_beta_scaled"));
    out.push_back(make_gaussian_bump());
    out.push_back(make_compact_bump());
    out.push_back(make_clip_quadratic(8.0, 2.0));
    out.push_back(make_clip_linear(1.0, 2.0));
    return out;
}

TestFunction eigen_solve(double rho, EigenSign sign, const GParams& p, EigenParity parity,
                         double x_max, int n, double overflow_cap) {
    if (!(rho >= 0.0)) throw config_error("eigen_solve: rho must be >= 0");
    p.require_nondegenerate_lo("eigen_solve");
    if (n < 2 || n % 2 != 0) throw config_error("eigen_solve: n must be even and >= 2");
    if (!(x_max > 0.0)) throw config_error("eigen_solve: x_max must be positive");

    const double sgn = (sign == EigenSign::plus) ? 1.0 : -1.0;
    auto rhs = [&](double x, double y1, double y2) {
        return g_inverse(sgn * (rho * y1 - 0.5 * x * y2), p);
    };

    const int half = n / 2;
    const double h = 2.0 * x_max / n;
    std::vector<double> xs(n + 1), f(n + 1), d1(n + 1);

    const double f0 = (parity == EigenParity::even) ? 1.0 : 0.0;
    const double g0 = (parity == EigenParity::even) ? 0.0 : 1.0;

    for (int dir = -1; dir <= 1; dir += 2) {
        double x = 0.0, y1 = f0, y2 = g0;
        const double step = dir * h;
        xs[half] = 0.0;
        f[half] = y1;
        d1[half] = y2;
        for (int k = 1; k <= half; ++k) {
            const double k1a = y2, k1b = rhs(x, y1, y2);
            const double k2a = y2 + 0.5 * step * k1b,
                         k2b = rhs(x + 0.5 * step, y1 + 0.5 * step * k1a, y2 + 0.5 * step * k1b);
            const double k3a = y2 + 0.5 * step * k2b,
                         k3b = rhs(x + 0.5 * step, y1 + 0.5 * step * k2a, y2 + 0.5 * step * k2b);
            const double k4a = y2 + step * k3b,
                         k4b = rhs(x + step, y1 + step * k3a, y2 + step * k3b);
            y1 += step / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
            y2 += step / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
            x += step;
            if (!(std::abs(y1) <= overflow_cap) || !(std::abs(y2) <= overflow_cap))
                throw numeric_error("eigen_solve: solution exceeded overflow cap at x = " +
                                    std::to_string(x));
            const int idx = half + dir * k;
            xs[idx] = x;
            f[idx] = y1;
            d1[idx] = y2;
        }
    }

    std::vector<double> d2(n + 1);
    for (int i = 0; i <= n; ++i) d2[i] = rhs(xs[i], f[i], d1[i]);

    std::ostringstream nm;
    nm << "eigen_rho" << rho << (sign == EigenSign::plus ? "_plus" : "_minus")
       << (parity == EigenParity::even ? "_even" : "_odd");
    return make_tabulated(nm.str(), std::move(xs), std::move(f), std::move(d1), std::move(d2));
}

namespace {

struct TableEval {
    std::shared_ptr<const TabulatedData> t;
    double x0, h;
    int n;

    int cell(double x) const {
        int i = static_cast<int>(std::floor((x - x0) / h));
        return std::clamp(i, 0, n - 2);
    }
    // cubic Hermite on (vals, slopes)
    double hermite(const std::vector<double>& vals, const std::vector<double>& slopes,
                   double x) const {
        if (x <= t->xs.front()) return vals.front();
        if (x >= t->xs.back()) return vals.back();
        const int i = cell(x);
        const double s = (x - t->xs[i]) / h;
        const double a = vals[i], b = vals[i + 1], ma = slopes[i] * h, mb = slopes[i + 1] * h;
        const double s2 = s * s, s3 = s2 * s;
        return a * (2.0 * s3 - 3.0 * s2 + 1.0) + ma * (s3 - 2.0 * s2 + s) +
               b * (-2.0 * s3 + 3.0 * s2) + mb * (s3 - s2);
    }
    double linear(const std::vector<double>& vals, double x) const {
        if (x <= t->xs.front()) return vals.front();
        if (x >= t->xs.back()) return vals.back();
        const int i = cell(x);
        const double s = (x - t->xs[i]) / h;
        return vals[i] * (1.0 - s) + vals[i + 1] * s;
    }
};

} // namespace

TestFunction make_tabulated(std::string name, std::vector<double> xs, std::vector<double> f,
                            std::vector<double> d1, std::vector<double> d2) {
    const std::size_t n = xs.size();
    if (n < 2 || f.size() != n || d1.size() != n || d2.size() != n)
        throw config_error("make_tabulated: need >= 2 rows of equal length");
    const double h = xs[1] - xs[0];
    if (!(h > 0.0)) throw config_error("make_tabulated: x not increasing");
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(xs[i] - xs[0] - i * h) > 1e-9 * std::max(1.0, std::abs(xs[i])))
            throw config_error("make_tabulated: x grid not uniform");

    auto data = std::make_shared<TabulatedData>();
    data->xs = std::move(xs);
    data->f = std::move(f);
    data->d1 = std::move(d1);
    data->d2 = std::move(d2);

    TableEval ev{data, data->xs.front(), h, static_cast<int>(n)};

    TestFunction tf;
    tf.name = std::move(name);
    tf.kind = FnKind::tabulated;
    tf.table = data;
    tf.f = [ev](double x) { return ev.hermite(ev.t->f, ev.t->d1, x); };
    tf.d1 = [ev](double x) { return ev.hermite(ev.t->d1, ev.t->d2, x); };
    tf.d2 = [ev](double x) { return ev.linear(ev.t->d2, x); };
    tf.sup_norm = 0.0;
    for (double v : data->f) tf.sup_norm = std::max(tf.sup_norm, std::abs(v));
    return tf;
}

void write_tabulated_csv(const TestFunction& tf, std::ostream& out) {
    if (!tf.table) throw config_error("write_tabulated_csv: not a tabulated function");
    const auto& t = *tf.table;
    out << "x,f,df,d2f\n";
    char buf[128];
    for (std::size_t i = 0; i < t.xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", t.xs[i], t.f[i], t.d1[i],
                      t.d2[i]);
        out << buf;
    }
}

TestFunction read_tabulated_csv(std::istream& in, std::string name) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,f,df,d2f", 0) != 0)
        throw config_error("read_tabulated_csv: missing x,f,df,d2f header");
    std::vector<double> xs, f, d1, d2;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double a, b, c, d;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) != 4)
            throw config_error("read_tabulated_csv: bad row: " + line);
        xs.push_back(a);
        f.push_back(b);
        d1.push_back(c);
        d2.push_back(d);
    }
    return make_tabulated(std::move(name), std::move(xs), std::move(f), std::move(d1),
                          std::move(d2));
}

} // namespace gstein
