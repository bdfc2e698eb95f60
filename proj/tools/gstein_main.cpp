// gstein: G-normal sublinear expectations, realization measures, and the
// Stein-type verification suites, behind one deterministic CLI.
//
// Commands: expectation, solve, realize, stein-check, eigen, oracle,
// selftest, report.  Exit codes: 0 pass, 1 verification failure,
// 2 usage/config error, 3 numerical-contract violation.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gstein/config.hpp"
#include "gstein/oracle.hpp"
#include "gstein/selftest.hpp"
#include "gstein/stein.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace gstein;

namespace {

constexpr int kSchemaVersion = 1;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

TestFunction named_function(const std::string& name, const GParams& p) {
    if (name.rfind("const:", 0) == 0) return make_constant(std::stod(name.substr(6)));
    if (name.rfind("@", 0) == 0) {
        std::ifstream in(name.substr(1));
        if (!in) throw config_error("cannot open function file " + name.substr(1));
        return read_tabulated_csv(in, fs::path(name.substr(1)).stem().string());
    }
    for (auto& tf : standard_battery(p))
        if (tf.name == name) return tf;
    throw config_error("unknown function '" + name + "' (battery names, const:<v>, or @file.csv)");
}

ordered_json grid_json(const Grid& g) {
    ordered_json j;
    j["x_min"] = g.x_min;
    j["x_max"] = g.x_max;
    j["nx"] = g.nx;
    j["t_max"] = g.t_max;
    j["dt"] = g.dt;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file " + path);
    out << text;
}

void write_json(const std::string& path, const ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_measure_csv(const std::string& path, const Measure& m) {
    std::ostringstream out;
    out << "point,weight\n";
    for (std::size_t i = 0; i < m.points.size(); ++i)
        out << fmt(m.points[i]) << "," << fmt(m.weights[i]) << "\n";
    write_text(path, out.str());
}

int cmd_expectation(const RunConfig& rc) {
    const auto t0 = std::chrono::steady_clock::now();
    rc.validate();
    const GParams p = rc.gparams();
    const SolveConfig cfg = rc.solve_config();
    const TestFunction phi = named_function(rc.phi, p);
    const double value = g_expectation(phi, 1.0, 0.0, p, cfg);
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
    std::cout << "N[" << phi.name << "] = " << fmt(value) << "\n";
    if (!rc.json_path.empty()) {
        ordered_json j;
        j["schema"] = kSchemaVersion;
        j["phi"] = phi.name;
        j["sigma_lo"] = p.sigma_lo;
        j["sigma_hi"] = p.sigma_hi;
        j["value"] = value;
        j["grid"] = grid_json(cfg.grid);
        j["runtime_ms"] = ms.count();
        write_json(rc.json_path, j);
    }
    return 0;
}

int cmd_solve(const RunConfig& rc) {
    rc.validate();
    const GParams p = rc.gparams();
    const SolveConfig cfg = rc.solve_config();
    const TestFunction phi = named_function(rc.phi, p);
    const ScalarField field = solve_g_heat(phi, p, cfg);
    std::cout << "u(" << fmt(std::min(1.0, cfg.grid.t_max)) << ", 0) = "
              << fmt(field.value(std::min(1.0, cfg.grid.t_max), 0.0)) << "\n";
    if (!rc.dump_grid.empty()) {
        std::ostringstream out;
        write_field_csv(field, out, rc.stride);
        write_text(rc.dump_grid, out.str());
        std::cout << "field written to " << rc.dump_grid << "\n";
    }
    return 0;
}

int cmd_realize(const RunConfig& rc) {
    rc.validate();
    const GParams p = rc.gparams();
    const SolveConfig cfg = rc.solve_config();
    const TestFunction phi = named_function(rc.phi, p);
    const RealizationResult r = realize(phi, p, cfg, rc.mc_paths, rc.seed);
    std::cout << "N[" << phi.name << "] = " << fmt(r.n_g) << "  mu[phi] = " << fmt(r.mu_phi)
              << "  gap = " << fmt(r.gap) << "\n";
    if (r.mc_measure) std::cout << "mc_gap = " << fmt(r.mc_gap) << "\n";
    if (!rc.out_path.empty()) write_measure_csv(rc.out_path, r.measure);
    if (!rc.json_path.empty()) {
        ordered_json j;
        j["schema"] = kSchemaVersion;
        j["phi"] = phi.name;
        j["sigma_lo"] = p.sigma_lo;
        j["sigma_hi"] = p.sigma_hi;
        j["n_g"] = r.n_g;
        j["mu_phi"] = r.mu_phi;
        j["gap"] = r.gap;
        j["mc_paths"] = rc.mc_paths;
        j["mc_gap"] = r.mc_measure ? ordered_json(r.mc_gap) : ordered_json(nullptr);
        write_json(rc.json_path, j);
    }
    return 0;
}

int cmd_stein_check(const RunConfig& rc, bool all) {
    rc.validate();
    const GParams p = rc.gparams();
    const SolveConfig cfg = rc.solve_config();
    const double tol = rc.tol_scale * grid_tolerance(cfg.grid);

    std::vector<TestFunction> fns;
    if (all)
        fns = standard_battery(p);
    else
        fns.push_back(named_function(rc.phi, p));

    const double s_list[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    bool pass = true;
    ordered_json reports = ordered_json::array();
    for (const auto& phi : fns) {
        SteinReport rep = verify_proposition_main(phi, p, cfg);
        rep.conjecture_gap = conjecture_gap(phi, p, cfg);
        rep.w_values = interpolation_check(phi, p, cfg, s_list);
        rep.tolerances_used = {tol};
        bool ok = std::abs(rep.residual) <= tol && std::abs(rep.dt_u - rep.drift_term) <= tol &&
                  std::abs(rep.dt_u - rep.g_term) <= tol &&
                  *rep.conjecture_gap >= -std::max(tol, 5e-3);
        for (const auto& [s, w] : rep.w_values)
            ok = ok && std::abs(w - rep.n_g) <= std::max(tol, 8e-3);
        std::cout << (ok ? "PASS" : "FAIL") << " " << phi.name
                  << ": residual = " << fmt(rep.residual) << ", dt_u = " << fmt(rep.dt_u)
                  << ", drift = " << fmt(rep.drift_term) << ", g_term = " << fmt(rep.g_term)
                  << ", conjecture_gap = " << fmt(*rep.conjecture_gap) << "\n";
        pass = pass && ok;
        reports.push_back(rep.to_json());
    }
    if (!rc.json_path.empty()) {
        ordered_json j;
        j["schema"] = kSchemaVersion;
        j["sigma_lo"] = p.sigma_lo;
        j["sigma_hi"] = p.sigma_hi;
        j["theta_approx"] = "computed realization plus reference Gaussians attaining the max";
        j["reports"] = reports;
        write_json(rc.json_path, j);
    }
    return pass ? 0 : 1;
}

int cmd_eigen(const RunConfig& rc, double rho, const std::string& sign,
              const std::string& parity, double x_max, int n) {
    rc.validate();
    const GParams p = rc.gparams();
    const EigenSign s = sign == "minus" ? EigenSign::minus : EigenSign::plus;
    const EigenParity par = parity == "odd" ? EigenParity::odd : EigenParity::even;
    const TestFunction tf = eigen_solve(rho, s, p, par, x_max, n);
    std::ostringstream out;
    write_tabulated_csv(tf, out);
    if (!rc.out_path.empty()) {
        write_text(rc.out_path, out.str());
        std::cout << tf.name << " written to " << rc.out_path << "\n";
    } else {
        std::cout << out.str();
    }
    return 0;
}

int cmd_oracle(const RunConfig& rc) {
    rc.validate();
    const GParams p = rc.gparams();
    const SolveConfig cfg = rc.solve_config();
    const TestFunction phi = named_function(rc.phi, p);
    const LatticeConfig lat = LatticeConfig::defaults(p, rc.steps, rc.x_half);
    const double tree = tree_expectation(phi, p, lat, rc.exec_mode());
    const double pde = g_expectation(phi, 1.0, 0.0, p, cfg);
    std::cout << "tree[" << phi.name << "] = " << fmt(tree) << "  pde = " << fmt(pde)
              << "  deviation = " << fmt(tree - pde) << "\n";
    return 0;
}

int cmd_selftest(const RunConfig& rc, double dx) {
    rc.validate();
    const GParams p = rc.gparams();
    const long paths = rc.mc_paths > 0 ? rc.mc_paths : 100000;
    const auto results = run_selftest(p, dx, rc.x_half, rc.seed, paths, rc.exec_mode());
    bool pass = true;
    ordered_json suites = ordered_json::array();
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name << " (worst " << fmt(r.worst)
                  << (r.detail.empty() ? "" : ", " + r.detail) << ")\n";
        ordered_json sj;
        sj["name"] = r.name;
        sj["pass"] = r.pass;
        sj["worst"] = r.worst;
        sj["detail"] = r.detail;
        suites.push_back(sj);
        if (!r.pass && pass) std::cout << "first failing suite: " << r.name << "\n";
        pass = pass && r.pass;
    }
    if (!rc.json_path.empty()) {
        ordered_json j;
        j["schema"] = kSchemaVersion;
        j["sigma_lo"] = p.sigma_lo;
        j["sigma_hi"] = p.sigma_hi;
        j["suites"] = suites;
        write_json(rc.json_path, j);
    }
    return pass ? 0 : 1;
}

int cmd_report(const RunConfig& rc) {
    if (rc.in_dir.empty() || rc.out_dir.empty())
        throw config_error("report: --in and --out directories are required");
    if (!fs::is_directory(rc.in_dir)) throw config_error("report: --in is not a directory");

    std::vector<fs::path> inputs;
    for (const auto& e : fs::directory_iterator(rc.in_dir))
        if (e.path().extension() == ".json") inputs.push_back(e.path());
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) throw config_error("report: no .json inputs in " + rc.in_dir);

    ordered_json bundle;
    bundle["schema"] = kSchemaVersion;
    bundle["inputs"] = ordered_json::array();
    bundle["reports"] = ordered_json::array();
    double sig_lo = 0.0, sig_hi = 0.0;
    bool have_band = false;
    std::vector<std::pair<double, double>> w_rows;
    for (const auto& path : inputs) {
        std::ifstream in(path);
        ordered_json j;
        in >> j;
        if (!j.contains("schema") || j["schema"].get<int>() != kSchemaVersion)
            throw config_error("report: unsupported schema in " + path.string());
        bundle["inputs"].push_back(path.filename().string());
        if (j.contains("reports")) {
            for (const auto& rep : j["reports"]) {
                bundle["reports"].push_back(rep);
                if (rep.contains("w_values"))
                    for (const auto& sw : rep["w_values"])
                        w_rows.emplace_back(sw[0].get<double>(), sw[1].get<double>());
            }
            sig_lo = j["sigma_lo"].get<double>();
            sig_hi = j["sigma_hi"].get<double>();
            have_band = true;
        }
    }

    fs::create_directories(rc.out_dir);
    write_json((fs::path(rc.out_dir) / "report.json").string(), bundle);

    if (have_band && sig_lo > 0.0) {
        const GParams p(sig_lo, sig_hi);
        const double beta = p.beta();
        const double x0 = -3.141592653589793 / (1.0 + beta);
        std::ostringstream csv;
        csv << "x,phi_beta\n";
        const int samples = 512;
        for (int i = 0; i <= samples; ++i) {
            const double x = x0 + 2.0 * 3.141592653589793 * i / samples;
            csv << fmt(x) << "," << fmt(phi_beta(x, p)) << "\n";
        }
        write_text((fs::path(rc.out_dir) / "phi_beta.csv").string(), csv.str());
    }
    {
        std::ostringstream csv;
        csv << "s,w\n";
        for (const auto& [s, w] : w_rows) csv << fmt(s) << "," << fmt(w) << "\n";
        write_text((fs::path(rc.out_dir) / "w_values.csv").string(), csv.str());
    }
    std::cout << "bundle written to " << rc.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"G-normal sublinear expectation toolkit"};
    app.require_subcommand(1);

    RunConfig rc;

    // one pre-pass for --config so explicit flags override file values
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                std::ifstream in(argv[i + 1]);
                if (!in) throw config_error(std::string("cannot open config ") + argv[i + 1]);
                ordered_json j;
                in >> j;
                rc = RunConfig::from_json(j);
            } catch (const config_error& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return 2;
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return 2;
            }
        }
    }

    std::string config_path;
    double rho = 1.0, eigen_xmax = 10.0;
    std::string sign = "minus", parity = "even";
    int eigen_n = 4000;
    bool all = false;
    double selftest_dx = 0.02;

    auto add_common = [&](CLI::App* cmd, bool with_phi = true) {
        cmd->add_option("--config", config_path, "JSON run configuration");
        cmd->add_option("--sigma", [&rc](const std::vector<std::string>& v) {
            if (v.size() != 2) return false;
            rc.sigma_lo = std::stod(v[0]);
            rc.sigma_hi = std::stod(v[1]);
            return true;
        }, "volatility band LO HI")->expected(2);
        cmd->add_option("--dx", rc.dx, "grid spacing");
        cmd->add_option("--dt", rc.dt, "time step override (0 = from CFL)");
        cmd->add_option("--t-max", rc.t_max, "final march time");
        cmd->add_option("--xmax", rc.x_half, "half width of the spatial domain");
        cmd->add_option("--seed", rc.seed, "root seed for all randomness");
        cmd->add_option("--mc-paths", rc.mc_paths, "Monte Carlo path count");
        cmd->add_option("--json", rc.json_path, "JSON output path");
        cmd->add_option("--exec", rc.exec, "kernel execution: openmp or serial");
        cmd->add_option("--tol-scale", rc.tol_scale, "scale on grid-derived tolerances");
        if (with_phi) cmd->add_option("--phi", rc.phi, "function name, const:<v>, or @file.csv");
    };

    auto* c_exp = app.add_subcommand("expectation", "compute N_G[phi] = u(1, 0)");
    add_common(c_exp);
    auto* c_solve = app.add_subcommand("solve", "solve the G-heat equation and dump the field");
    add_common(c_solve);
    c_solve->add_option("--dump-grid", rc.dump_grid, "field CSV path");
    c_solve->add_option("--stride", rc.stride, "keep every K-th stored level");
    auto* c_real = app.add_subcommand("realize", "construct the realization measure");
    add_common(c_real);
    c_real->add_option("--out", rc.out_path, "measure CSV path");
    auto* c_stein = app.add_subcommand("stein-check", "run the Stein verification suites");
    add_common(c_stein);
    c_stein->add_flag("--all", all, "whole battery");
    auto* c_eigen = app.add_subcommand("eigen", "tabulate an eigenfunction of the ODE family");
    add_common(c_eigen, false);
    c_eigen->add_option("--rho", rho, "eigenvalue");
    c_eigen->add_option("--sign", sign, "plus or minus");
    c_eigen->add_option("--parity", parity, "even or odd");
    c_eigen->add_option("--eigen-xmax", eigen_xmax, "table half width");
    c_eigen->add_option("--n", eigen_n, "table steps (even)");
    c_eigen->add_option("--out", rc.out_path, "CSV path (stdout if omitted)");
    auto* c_oracle = app.add_subcommand("oracle", "lattice cross-check of the PDE value");
    add_common(c_oracle);
    c_oracle->add_option("--steps", rc.steps, "lattice time steps");
    auto* c_self = app.add_subcommand("selftest", "run every invariant suite, reduced resolution");
    add_common(c_self, false);
    c_self->add_option("--selftest-dx", selftest_dx, "reduced grid spacing");
    auto* c_rep = app.add_subcommand("report", "aggregate prior outputs into one bundle");
    c_rep->add_option("--config", config_path, "JSON run configuration");
    c_rep->add_option("--in", rc.in_dir, "directory of prior JSON outputs");
    c_rep->add_option("--out", rc.out_dir, "bundle output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c_exp->parsed()) return cmd_expectation(rc);
        if (c_solve->parsed()) return cmd_solve(rc);
        if (c_real->parsed()) return cmd_realize(rc);
        if (c_stein->parsed()) return cmd_stein_check(rc, all);
        if (c_eigen->parsed()) return cmd_eigen(rc, rho, sign, parity, eigen_xmax, eigen_n);
        if (c_oracle->parsed()) return cmd_oracle(rc);
        if (c_self->parsed()) return cmd_selftest(rc, selftest_dx);
        if (c_rep->parsed()) return cmd_report(rc);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numerical contract violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
