#include "gstein/gcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gstein {

GParams::GParams(double lo, double hi) : sigma_lo(lo), sigma_hi(hi) {
    if (!(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi))
        throw config_error("GParams: need 0 <= sigma_lo <= sigma_hi < inf, got [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

double GParams::beta() const {
    require_nondegenerate_lo("beta");
    return sigma_hi / sigma_lo;
}

void GParams::require_nondegenerate_lo(const char* who) const {
    if (sigma_lo <= 0.0)
        throw config_error(std::string(who) + ": requires sigma_lo > 0 (degenerate band)");
}

double g_eval(double a, const GParams& p) {
    const double s2 = (a >= 0.0) ? p.sigma_hi * p.sigma_hi : p.sigma_lo * p.sigma_lo;
    return 0.5 * s2 * a;
}

double g_inverse(double c, const GParams& p) {
    if (c >= 0.0) return 2.0 * c / (p.sigma_hi * p.sigma_hi);
    p.require_nondegenerate_lo("g_inverse");
    return 2.0 * c / (p.sigma_lo * p.sigma_lo);
}

Grid::Grid(double xmin, double xmax, int nx_, double tmax, double dt_)
    : x_min(xmin), x_max(xmax), nx(nx_), t_max(tmax), dt(dt_) {
    if (!(x_min < 0.0) || !(x_max > 0.0))
        throw config_error("Grid: need x_min < 0 < x_max");
    if (nx < 2) throw config_error("Grid: need nx >= 2");
    if (!(dx() > 0.0)) throw config_error("Grid: need dx > 0");
    if (!(t_max > 0.0) || !(dt > 0.0) || dt > t_max)
        throw config_error("Grid: need 0 < dt <= t_max");
}

int Grid::n_steps() const {
    return static_cast<int>(std::llround(t_max / dt));
}

int Grid::nearest_node(double x) const {
    int i = static_cast<int>(std::lround((x - x_min) / dx()));
    return std::clamp(i, 0, nx);
}

void Grid::require_cfl(const GParams& p) const {
    const double ratio = dt * p.sigma_hi * p.sigma_hi / (dx() * dx());
    if (ratio > 1.0)
        throw numeric_error("CFL violation: dt*sigma_hi^2/dx^2 = " + std::to_string(ratio) +
                            " > 1");
}

double ScalarField::stored_dt() const {
    return stride * grid.dt;
}

namespace {

// index of the last element <= t in a sorted vector, clamped to [0, n-2]
int bracket(const std::vector<double>& v, double t) {
    auto it = std::upper_bound(v.begin(), v.end(), t);
    int r = static_cast<int>(it - v.begin()) - 1;
    return std::clamp(r, 0, static_cast<int>(v.size()) - 2);
}

} // namespace

double ScalarField::value(double t, double x) const {
    const double eps_t = 1e-12 * std::max(1.0, grid.t_max);
    const double eps_x = 1e-12 * std::max(1.0, std::abs(grid.x_max) + std::abs(grid.x_min));
    if (t < -eps_t || t > times.back() + eps_t)
        throw config_error("ScalarField::value: t outside stored range");
    if (x < grid.x_min - eps_x || x > grid.x_max + eps_x)
        throw config_error("ScalarField::value: x outside domain");
    t = std::clamp(t, times.front(), times.back());
    x = std::clamp(x, grid.x_min, grid.x_max);

    const int r = bracket(times, t);
    const double th = (times[r + 1] > times[r]) ? (t - times[r]) / (times[r + 1] - times[r]) : 0.0;

    const double dxv = grid.dx();
    int i = static_cast<int>(std::floor((x - grid.x_min) / dxv));
    i = std::clamp(i, 0, grid.nx - 1);
    const double xi = (x - grid.node(i)) / dxv;

    const auto& a = rows[r];
    const auto& b = rows[r + 1];
    const double va = a[i] * (1.0 - xi) + a[i + 1] * xi;
    const double vb = b[i] * (1.0 - xi) + b[i + 1] * xi;
    return va * (1.0 - th) + vb * th;
}

std::vector<double> ScalarField::row_at_time(double t) const {
    const double eps_t = 1e-12 * std::max(1.0, grid.t_max);
    if (t < -eps_t || t > times.back() + eps_t)
        throw config_error("ScalarField::row_at_time: t outside stored range");
    t = std::clamp(t, times.front(), times.back());
    const int r = bracket(times, t);
    const double th = (times[r + 1] > times[r]) ? (t - times[r]) / (times[r + 1] - times[r]) : 0.0;
    std::vector<double> out(rows[r].size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = rows[r][i] * (1.0 - th) + rows[r + 1][i] * th;
    return out;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (const auto& row : rows)
        for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::initial_max_abs() const {
    double m = 0.0;
    for (double v : rows.front()) m = std::max(m, std::abs(v));
    return m;
}

Measure::Measure(std::vector<double> pts, std::vector<double> w)
    : points(std::move(pts)), weights(std::move(w)) {
    if (points.size() != weights.size() || points.empty())
        throw config_error("Measure: points/weights size mismatch or empty");
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(weights[i] >= 0.0))
            throw config_error("Measure: negative weight at index " + std::to_string(i));
        if (i > 0 && !(points[i] > points[i - 1]))
            throw config_error("Measure: points not strictly increasing");
        sum += weights[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw config_error("Measure: weights sum to " + std::to_string(sum) + ", not 1");
}

double Measure::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * points[i];
    return s;
}

double Measure::variance() const {
    const double m = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = points[i] - m;
        s += weights[i] * d * d;
    }
    return s;
}

double Measure::tail_mass(double threshold) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (std::abs(points[i]) > threshold) s += weights[i];
    return s;
}

double measure_expectation(const Measure& m, const std::function<double(double)>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.points.size(); ++i) s += m.weights[i] * f(m.points[i]);
    return s;
}

Measure gaussian_measure(double sigma, double half_width_sigmas, int n_points) {
    if (!(sigma > 0.0)) throw config_error("gaussian_measure: sigma must be positive");
    if (n_points < 3) throw config_error("gaussian_measure: need at least 3 points");
    const double w = half_width_sigmas * sigma;
    const double h = 2.0 * w / n_points;
    std::vector<double> xs(n_points), ws(n_points);
    double sum = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double x = -w + (i + 0.5) * h;
        xs[i] = x;
        ws[i] = std::exp(-0.5 * x * x / (sigma * sigma));
        sum += ws[i];
    }
    for (double& v : ws) v /= sum;
    return Measure(std::move(xs), std::move(ws));
}

} // namespace gstein
