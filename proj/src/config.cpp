#include "gstein/config.hpp"

#include <cmath>
#include <set>

namespace gstein {

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["sigma_lo"] = sigma_lo;
    j["sigma_hi"] = sigma_hi;
    j["dx"] = dx;
    j["x_half"] = x_half;
    j["t_max"] = t_max;
    j["dt"] = dt;
    j["cfl_safety"] = cfl_safety;
    j["boundary"] = boundary;
    j["phi"] = phi;
    j["seed"] = seed;
    j["mc_paths"] = mc_paths;
    j["mc_stride"] = mc_stride;
    j["steps"] = steps;
    j["stride"] = stride;
    j["tol_scale"] = tol_scale;
    j["exec"] = exec;
    j["json_path"] = json_path;
    j["out_path"] = out_path;
    j["dump_grid"] = dump_grid;
    j["in_dir"] = in_dir;
    j["out_dir"] = out_dir;
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::ordered_json& j) {
    static const std::set<std::string> known = {
        "sigma_lo", "sigma_hi", "dx",     "x_half",    "t_max",     "dt",
        "cfl_safety", "boundary", "phi",  "seed",      "mc_paths",  "mc_stride",
        "steps",    "stride",   "tol_scale", "exec",   "json_path", "out_path",
        "dump_grid", "in_dir",  "out_dir"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw config_error("RunConfig: unknown key '" + it.key() + "'");
    RunConfig c;
    auto get = [&](const char* k, auto& slot) {
        if (j.contains(k)) slot = j.at(k).get<std::decay_t<decltype(slot)>>();
    };
    get("sigma_lo", c.sigma_lo);
    get("sigma_hi", c.sigma_hi);
    get("dx", c.dx);
    get("x_half", c.x_half);
    get("t_max", c.t_max);
    get("dt", c.dt);
    get("cfl_safety", c.cfl_safety);
    get("boundary", c.boundary);
    get("phi", c.phi);
    get("seed", c.seed);
    get("mc_paths", c.mc_paths);
    get("mc_stride", c.mc_stride);
    get("steps", c.steps);
    get("stride", c.stride);
    get("tol_scale", c.tol_scale);
    get("exec", c.exec);
    get("json_path", c.json_path);
    get("out_path", c.out_path);
    get("dump_grid", c.dump_grid);
    get("in_dir", c.in_dir);
    get("out_dir", c.out_dir);
    return c;
}

void RunConfig::validate() const {
    (void)gparams();
    if (!(dx > 0.0)) throw config_error("RunConfig: dx must be positive");
    if (!(x_half > 0.0)) throw config_error("RunConfig: x_half must be positive");
    if (!(t_max > 0.0)) throw config_error("RunConfig: t_max must be positive");
    if (dt < 0.0) throw config_error("RunConfig: dt must be >= 0");
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
        throw config_error("RunConfig: cfl_safety must be in (0, 1]");
    if (boundary != "freeze" && boundary != "linear_extrapolate")
        throw config_error("RunConfig: boundary must be freeze or linear_extrapolate");
    if (exec != "openmp" && exec != "serial")
        throw config_error("RunConfig: exec must be openmp or serial");
    if (mc_paths < 0) throw config_error("RunConfig: mc_paths must be >= 0");
    if (steps < 1) throw config_error("RunConfig: steps must be >= 1");
    if (stride < 1) throw config_error("RunConfig: stride must be >= 1");
    if (!(tol_scale > 0.0)) throw config_error("RunConfig: tol_scale must be positive");
    // the CFL contract itself (a numerics violation, not a usage error)
    (void)solve_config();
}

kernels::Exec RunConfig::exec_mode() const {
    return exec == "serial" ? kernels::Exec::serial : kernels::Exec::openmp;
}

SolveConfig RunConfig::solve_config() const {
    const GParams p = gparams();
    const BoundaryRule rule =
        boundary == "linear_extrapolate" ? BoundaryRule::linear_extrapolate : BoundaryRule::freeze;
    if (dt > 0.0) {
        const int nx = static_cast<int>(std::lround(2.0 * x_half / dx));
        Grid g(-x_half, x_half, nx, t_max, dt);
        g.require_cfl(p);
        SolveConfig cfg(g, rule, cfl_safety);
        cfg.exec = exec_mode();
        return cfg;
    }
    SolveConfig cfg = SolveConfig::defaults(p, dx, x_half, t_max, cfl_safety);
    cfg.boundary = rule;
    cfg.exec = exec_mode();
    return cfg;
}

} // namespace gstein
