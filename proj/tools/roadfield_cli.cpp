// Command-line front end: one subcommand per operation, one config file per
// invocation, deterministic file outputs.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "roadfield/config.hpp"
#include "roadfield/csv.hpp"
#include "roadfield/dispersion.hpp"
#include "roadfield/errors.hpp"
#include "roadfield/geometry_plot.hpp"
#include "roadfield/simulate.hpp"
#include "roadfield/stationary.hpp"
#include "roadfield/sweep.hpp"

namespace fs = std::filesystem;
using namespace roadfield;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 0;
    double tol = 1e-8;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot write " + path.string());
    out << content;
}

std::string profile_csv(const StationaryProfile& prof) {
    std::string out = "U,V0,V_prime_0,converged,minimal_candidate\n";
    out += csv_num(prof.U) + ',' + csv_num(prof.V0) + ',' + csv_num(prof.V_prime_0) + ',' +
           (prof.converged ? "true" : "false") + ',' +
           (prof.minimal_candidate ? "true" : "false") + '\n';
    out += "y,V\n";
    for (size_t i = 0; i < prof.y.size(); ++i)
        out += csv_num(prof.y[i]) + ',' + csv_num(prof.V[i]) + '\n';
    return out;
}

int cmd_speed(const Options& opt) {
    const RunConfig cfg = load_config_file(opt.config_path);
    const CriticalSpeed cs = critical_speed(cfg.make_params(), cfg.make_field(),
                                            cfg.make_road(), cfg.direction, opt.tol);
    const std::string row = speed_csv_row(cfg.make_params(), cfg.field.r,
                                          cfg.make_road().g_prime_0(), cfg.direction, cs);
    write_file(fs::path(opt.out_dir) / "speed.csv", speed_csv_header() + "\n" + row + "\n");
    std::cout << speed_csv_header() << '\n' << row << '\n';
    return 0;
}

int cmd_thresholds(const Options& opt) {
    const RunConfig cfg = load_config_file(opt.config_path);
    write_file(fs::path(opt.out_dir) / "thresholds.csv", thresholds_csv(cfg));
    return 0;
}

int cmd_sweep(const Options& opt) {
    const RunConfig cfg = load_config_file(opt.config_path);
    write_file(fs::path(opt.out_dir) / "sweep.csv", sweep_csv(cfg, opt.workers, opt.tol));
    return 0;
}

int cmd_stationary(const Options& opt) {
    const RunConfig cfg = load_config_file(opt.config_path);
    const ModelParams p = cfg.make_params();
    const FieldReaction f = cfg.make_field();
    StationaryProfile prof;
    if (cfg.road.kind == "zero")
        prof = stationary_mortality(p, f, 0.0);
    else if (cfg.road.kind == "mortality")
        prof = stationary_mortality(p, f, cfg.road.rho);
    else
        prof = find_Ustar(p, cfg.make_road(), f);
    write_file(fs::path(opt.out_dir) / "stationary.csv", profile_csv(prof));
    std::cout << "U = " << csv_num(prof.U) << ", V(0) = " << csv_num(prof.V0)
              << ", V'(0) = " << csv_num(prof.V_prime_0)
              << (prof.converged ? " (converged)" : " (truncated)") << '\n';
    return 0;
}

int cmd_limits(const Options& opt) {
    const RunConfig cfg = load_config_file(opt.config_path);
    const ModelParams p = cfg.make_params();
    const double gp0 = cfg.make_road().g_prime_0();
    const LimitConstants lc = limit_constants(p, cfg.field.r, gp0);
    std::string out = "d,mu,nu,fp0,gp0,h,k\n";
    out += csv_num(p.d) + ',' + csv_num(p.mu) + ',' + csv_num(p.nu) + ',' +
           csv_num(cfg.field.r) + ',' + csv_num(gp0) + ',' + csv_num(lc.h) + ',' +
           csv_num(lc.k) + '\n';
    write_file(fs::path(opt.out_dir) / "limits.csv", out);
    std::cout << "h = " << csv_num(lc.h) << ", k = " << csv_num(lc.k) << '\n';
    return 0;
}

int cmd_geometry(const Options& opt) {
    const RunConfig cfg = load_config_file(opt.config_path);
    const ModelParams p = cfg.make_params();
    const FieldReaction f = cfg.make_field();
    const RoadReaction g = cfg.make_road();
    const CriticalSpeed cs = critical_speed(p, f, g, cfg.direction, opt.tol);
    const ModelParams pd = p.with_q(p.q_toward(cfg.direction));
    const double ck = kpp_speed(p.d, f.f_prime_0());

    const fs::path dir(opt.out_dir);
    write_file(dir / "geometry_at.svg", plot_geometry(pd, f, g, cs.w_star));
    write_file(dir / "geometry_above.svg",
               plot_geometry(pd, f, g, cs.w_star + std::max(0.5, 0.25 * cs.w_star)));
    if (!cs.at_kpp)
        write_file(dir / "geometry_below.svg",
                   plot_geometry(pd, f, g, 0.5 * (ck + cs.w_star)));
    std::cout << "w_star = " << csv_num(cs.w_star) << (cs.at_kpp ? " (KPP speed)" : "")
              << '\n';
    return 0;
}

int cmd_simulate(const Options& opt) {
    const RunConfig cfg = load_config_file(opt.config_path);
    SimSetup setup = cfg.make_setup();
    if (opt.workers > 0) setup.threads = opt.workers;
    const RunResult res = run(setup);

    std::string out = "t,x_front_plus,x_front_minus,u_max,mass\n";
    for (size_t i = 0; i < res.series.times.size(); ++i) {
        out += csv_num(res.series.times[i]) + ',' + csv_num(res.series.front_plus[i]) + ',' +
               csv_num(res.series.front_minus[i]) + ',' + csv_num(res.series.u_max[i]) + ',' +
               csv_num(res.series.mass[i]) + '\n';
    }
    const fs::path dir(opt.out_dir);
    write_file(dir / "timeseries.csv", out);

    for (const auto& [t, state] : res.snapshots) {
        std::string snap = "x,y,v\n";
        const GridSpec grid = cfg.make_grid();
        for (int j = 0; j < state.ny; ++j)
            for (int i = 0; i < state.nx; ++i)
                snap += csv_num(grid.x_at(i)) + ',' + csv_num(grid.y_at(j)) + ',' +
                        csv_num(state.at(i, j)) + '\n';
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_t%g.csv", t);
        write_file(dir / name, snap);
    }

    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
    try {
        const SpeedFit plus =
            estimate_speed(res.series.times, res.series.front_plus, setup.fit_window);
        const SpeedFit minus =
            estimate_speed(res.series.times, res.series.front_minus, setup.fit_window);
        std::cout << "w_emp_plus = " << csv_num(plus.speed) << " +/- " << csv_num(plus.stderr_)
                  << ", w_emp_minus = " << csv_num(-minus.speed) << " +/- "
                  << csv_num(minus.stderr_) << '\n';
    } catch (const NumericalError&) {
        std::cout << "front series too short for a speed fit\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"road-field front propagation toolkit"};
    app.require_subcommand(1);

    Options opt;
    const char* names[] = {"speed",    "thresholds", "stationary", "simulate",
                           "limits",   "geometry",   "sweep"};
    const char* descs[] = {
        "critical spreading speed for the configured direction",
        "closed-form threshold over the sweep grid",
        "stationary road/field profile",
        "finite-difference simulation of the coupled system",
        "large-diffusion and large-transport scaling constants",
        "dispersion geometry plots around the critical speed",
        "critical speeds over the (D, q, rho) sweep grid"};
    for (int i = 0; i < 7; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config", opt.config_path, "configuration file")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--workers", opt.workers, "worker threads (0 = auto)");
        sub->add_option("--tol", opt.tol, "bisection tolerance")
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        fs::create_directories(opt.out_dir);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "speed") return cmd_speed(opt);
        if (sub == "thresholds") return cmd_thresholds(opt);
        if (sub == "stationary") return cmd_stationary(opt);
        if (sub == "simulate") return cmd_simulate(opt);
        if (sub == "limits") return cmd_limits(opt);
        if (sub == "geometry") return cmd_geometry(opt);
        if (sub == "sweep") return cmd_sweep(opt);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error kind=config msg=\"" << e.what() << "\"\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error kind=config msg=\"" << e.what() << "\"\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error kind=numerical msg=\"" << e.what() << "\"\n";
        return 3;
    }
}
