#include "roadfield/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "roadfield/errors.hpp"

namespace roadfield {

namespace {

constexpr double kValueCap = 1e6;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_threads(int requested, int rows) {
    int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    return std::min(t, std::max(1, rows));
}

// Split rows [0, ny) into contiguous bands, one per worker.  Each band writes
// disjoint output and reads only the previous state, so the result does not
// depend on the number of workers.
template <class Fn>
void for_bands(int ny, int threads, Fn&& fn) {
    if (threads <= 1) {
        fn(0, ny, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    const int chunk = (ny + threads - 1) / threads;
    for (int t = 1; t < threads; ++t) {
        const int j0 = t * chunk;
        const int j1 = std::min(ny, j0 + chunk);
        if (j0 < j1) pool.emplace_back([&fn, j0, j1, t] { fn(j0, j1, t); });
    }
    fn(0, std::min(chunk, ny), 0);
    for (auto& th : pool) th.join();
}

struct StepScratch {
    std::vector<double> band_max;  // per-worker max |value|
};

template <class FF>
void field_rows(const SimState& s, SimState& out, const ModelParams& p, FF&& fv,
                const GridSpec& grid, double dt, int threads, StepScratch& scratch) {
    const int nx = s.nx;
    const int ny = s.ny;
    const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
    const double inv_dy2 = 1.0 / (grid.dy * grid.dy);
    const double ghost = 2.0 * grid.dy / p.d;
    const double dtd = dt * p.d;

    scratch.band_max.assign(threads, 0.0);
    for_bands(ny, threads, [&](int j0, int j1, int tid) {
        double mx = 0.0;
        for (int j = j0; j < j1; ++j) {
            const double* vc = &s.v[static_cast<size_t>(j) * nx];
            const double* vs = j > 0 ? vc - nx : nullptr;       // south row
            const double* vn = j < ny - 1 ? vc + nx : vc - nx;  // north row (mirror at top)
            double* o = &out.v[static_cast<size_t>(j) * nx];
            if (j == 0) {
                // exchange flux enters through a second-order ghost row:
                // v_ghost = v_1 + (2 dy / d) (mu u - nu v_0)
                const double* vu = vc + nx;
                const double* u = s.u.data();
                auto node = [&](int i, int il, int ir) {
                    const double lapx = (vc[il] + vc[ir] - 2.0 * vc[i]) * inv_dx2;
                    const double vg = vu[i] + ghost * (p.mu * u[i] - p.nu * vc[i]);
                    const double lapy = (vu[i] + vg - 2.0 * vc[i]) * inv_dy2;
                    o[i] = vc[i] + dtd * (lapx + lapy) + dt * fv(vc[i]);
                };
                node(0, 1, 1);
                for (int i = 1; i < nx - 1; ++i) node(i, i - 1, i + 1);
                node(nx - 1, nx - 2, nx - 2);
            } else {
                auto node = [&](int i, int il, int ir) {
                    const double lapx = (vc[il] + vc[ir] - 2.0 * vc[i]) * inv_dx2;
                    const double lapy = (vs[i] + vn[i] - 2.0 * vc[i]) * inv_dy2;
                    o[i] = vc[i] + dtd * (lapx + lapy) + dt * fv(vc[i]);
                };
                node(0, 1, 1);
                for (int i = 1; i < nx - 1; ++i) node(i, i - 1, i + 1);
                node(nx - 1, nx - 2, nx - 2);
            }
            for (int i = 0; i < nx; ++i) mx = std::max(mx, std::abs(o[i]));
        }
        scratch.band_max[tid] = std::max(scratch.band_max[tid], mx);
    });
}

void step_into(const SimState& s, SimState& out, const ModelParams& p, const FieldReaction& f,
               const RoadReaction& g, const GridSpec& grid, double dt, int threads) {
    if (s.nx < 3 || s.ny < 2) throw std::invalid_argument("step: grid must be at least 3 x 2");
    const int nx = s.nx;
    out.nx = s.nx;
    out.ny = s.ny;
    out.u.resize(s.u.size());
    out.v.resize(s.v.size());

    // road row: centred diffusion, upwind transport, exchange, reaction
    const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
    const double inv_dx = 1.0 / grid.dx;
    double road_max = 0.0;
    for (int i = 0; i < nx; ++i) {
        const int il = i > 0 ? i - 1 : 1;
        const int ir = i < nx - 1 ? i + 1 : nx - 2;
        const double lap = (s.u[il] + s.u[ir] - 2.0 * s.u[i]) * inv_dx2;
        double adv = 0.0;
        if (p.q > 0.0)
            adv = (s.u[i] - s.u[il]) * inv_dx;
        else if (p.q < 0.0)
            adv = (s.u[ir] - s.u[i]) * inv_dx;
        const double nu_ = s.u[i] + dt * (p.D * lap - p.q * adv + p.nu * s.v[i] -
                                          p.mu * s.u[i] + g(s.u[i]));
        out.u[i] = nu_;
        road_max = std::max(road_max, std::abs(nu_));
    }

    StepScratch scratch;
    const int workers = resolve_threads(threads, s.ny);
    if (f.kind() == FieldReaction::Kind::Logistic) {
        const double r = f.f_prime_0();
        field_rows(s, out, p, [r](double v) { return r * v * (1.0 - v); }, grid, dt, workers,
                   scratch);
    } else {
        field_rows(s, out, p, [&f](double v) { return f(v); }, grid, dt, workers, scratch);
    }

    double mx = road_max;
    for (double b : scratch.band_max) mx = std::max(mx, b);
    out.t = s.t + dt;
    if (!std::isfinite(mx) || mx > kValueCap)
        throw NumericalError("step: instability detected at t = " + std::to_string(out.t) +
                             " (max |value| = " + std::to_string(mx) + ")");
}

}  // namespace

double GridSpec::stable_dt(const ModelParams& p, const FieldReaction& f, const RoadReaction& g,
                           double u_cap, double v_cap) const {
    const double Lg = std::max(0.0, -g.slope_min(u_cap));
    const double Lf = std::max(0.0, -f.slope_min(v_cap));
    const double road = 2.0 * p.D / (dx * dx) + std::abs(p.q) / dx + p.mu + Lg;
    const double field =
        2.0 * p.d * (1.0 / (dx * dx) + 1.0 / (dy * dy)) + 2.0 * p.nu / dy + Lf;
    return 0.9 * std::min(1.0 / road, 1.0 / field);
}

SimState make_initial(const GridSpec& grid, double amp, double halfwidth) {
    SimState s;
    s.nx = grid.nx();
    s.ny = grid.ny();
    s.t = 0.0;
    s.u.assign(s.nx, 0.0);
    s.v.assign(static_cast<size_t>(s.nx) * s.ny, 0.0);
    for (int i = 0; i < s.nx; ++i)
        if (std::abs(grid.x_at(i)) <= halfwidth) s.u[i] = amp;
    return s;
}

SimState step(const SimState& s, const ModelParams& p, const FieldReaction& f,
              const RoadReaction& g, const GridSpec& grid) {
    if (s.nx != grid.nx() || s.ny != grid.ny())
        throw std::invalid_argument("step: state does not match the grid");
    double dt = grid.dt;
    if (dt <= 0.0) dt = grid.stable_dt(p, f, g, 2.0 * std::max(1.0, p.nu / p.mu), 2.0);
    SimState out;
    step_into(s, out, p, f, g, grid, dt, 1);
    return out;
}

FrontPair front_position(const SimState& s, const GridSpec& grid, double level, double U_ref) {
    if (!(U_ref > 0.0)) throw std::invalid_argument("front_position: reference U must be > 0");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("front_position: level must lie in (0, 1)");
    const double thr = level * U_ref;
    FrontPair out;
    const int nx = s.nx;
    for (int i = nx - 1; i >= 0; --i) {
        if (s.u[i] >= thr) {
            out.found_plus = true;
            if (i == nx - 1)
                out.plus = grid.x_at(i);
            else
                out.plus = grid.x_at(i) + grid.dx * (s.u[i] - thr) / (s.u[i] - s.u[i + 1]);
            break;
        }
    }
    for (int i = 0; i < nx; ++i) {
        if (s.u[i] >= thr) {
            out.found_minus = true;
            if (i == 0)
                out.minus = grid.x_at(i);
            else
                out.minus = grid.x_at(i) - grid.dx * (s.u[i] - thr) / (s.u[i] - s.u[i - 1]);
            break;
        }
    }
    return out;
}

FrontPair front_position(const SimState& s, const GridSpec& grid, double level,
                         const StationaryProfile& reference) {
    return front_position(s, grid, level, reference.U);
}

SpeedFit estimate_speed(const std::vector<double>& times, const std::vector<double>& xs,
                        double fit_window) {
    if (times.size() != xs.size())
        throw std::invalid_argument("estimate_speed: size mismatch");
    if (!(fit_window > 0.0 && fit_window <= 1.0))
        throw std::invalid_argument("estimate_speed: fit_window must lie in (0, 1]");
    std::vector<double> t, x;
    for (size_t i = 0; i < times.size(); ++i) {
        if (std::isfinite(xs[i])) {
            t.push_back(times[i]);
            x.push_back(xs[i]);
        }
    }
    if (t.size() < 2) throw NumericalError("estimate_speed: insufficient samples");
    const double cut = t.back() - fit_window * (t.back() - t.front());
    size_t k0 = 0;
    while (k0 < t.size() && t[k0] < cut - 1e-12) ++k0;
    const size_t n = t.size() - k0;
    if (n < 10) throw NumericalError("estimate_speed: insufficient samples in fit window");

    double tm = 0.0, xm = 0.0;
    for (size_t i = k0; i < t.size(); ++i) {
        tm += t[i];
        xm += x[i];
    }
    tm /= n;
    xm /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = k0; i < t.size(); ++i) {
        sxx += (t[i] - tm) * (t[i] - tm);
        sxy += (t[i] - tm) * (x[i] - xm);
    }
    SpeedFit fit;
    fit.n = static_cast<int>(n);
    fit.speed = sxy / sxx;
    double ssr = 0.0;
    for (size_t i = k0; i < t.size(); ++i) {
        const double r = x[i] - xm - fit.speed * (t[i] - tm);
        ssr += r * r;
    }
    fit.stderr_ = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
    return fit;
}

double profile_error(const SimState& s, const GridSpec& grid, const StationaryProfile& reference,
                     double window_halfwidth) {
    double err = 0.0;
    const int nx = s.nx;
    const int ny = s.ny;
    std::vector<double> vref(ny);
    for (int j = 0; j < ny; ++j) vref[j] = reference.value_at(grid.y_at(j));
    for (int i = 0; i < nx; ++i) {
        if (std::abs(grid.x_at(i)) > window_halfwidth) continue;
        err = std::max(err, std::abs(s.u[i] - reference.U));
        for (int j = 0; j < ny; ++j) err = std::max(err, std::abs(s.at(i, j) - vref[j]));
    }
    return err;
}

RunResult run(const SimSetup& setup) {
    const GridSpec& grid = setup.grid;
    const ModelParams& p = setup.params;
    RunResult res;

    SimState cur = make_initial(grid, setup.u0_amp, setup.u0_halfwidth);

    // supersolution level from the initial datum bounds the dynamics; feed it
    // to the reaction Lipschitz caps of the stability bound
    double umax0 = 0.0;
    for (double u : cur.u) umax0 = std::max(umax0, u);
    const double M = std::max((umax0 + setup.g.S()) / p.nu, 1.0 / p.mu);
    const double u_cap = 1.01 * std::max(umax0, M * p.nu);
    const double v_cap = 1.01 * std::max(1.0, M * p.mu);

    double dt = grid.dt;
    const double dt_max = grid.stable_dt(p, setup.f, setup.g, u_cap, v_cap);
    if (dt <= 0.0)
        dt = dt_max;
    else if (dt > dt_max * (1.0 + 1e-12))
        throw NumericalError("run: dt exceeds the stability bound " + std::to_string(dt_max));

    // reference stationary pair for the front level
    const double y_ref =
        std::max(50.0 * std::sqrt(p.d / setup.f.f_prime_0()), grid.Ly + 1.0);
    switch (setup.g.kind()) {
        case RoadReaction::Kind::Zero:
            res.reference = stationary_mortality(p, setup.f, 0.0, y_ref);
            break;
        case RoadReaction::Kind::Mortality:
            res.reference = stationary_mortality(p, setup.f, setup.g.rho(), y_ref);
            break;
        default:
            res.reference = find_Ustar(p, setup.g, setup.f, 1e-12, y_ref);
            break;
    }

    res.series.level = setup.level;
    auto record = [&](const SimState& st) {
        const FrontPair fp = front_position(st, grid, setup.level, res.reference.U);
        res.series.times.push_back(st.t);
        res.series.front_plus.push_back(fp.found_plus ? fp.plus : kNaN);
        res.series.front_minus.push_back(fp.found_minus ? fp.minus : kNaN);
        double um = 0.0, mass = 0.0;
        for (double u : st.u) {
            um = std::max(um, u);
            mass += u;
        }
        mass *= grid.dx;
        double vmass = 0.0;
        for (double v : st.v) vmass += v;
        mass += vmass * grid.dx * grid.dy;
        res.series.u_max.push_back(um);
        res.series.mass.push_back(mass);

        const double guard = grid.Lx - 10.0 * grid.dx;
        const bool near_edge = (fp.found_plus && fp.plus > guard) ||
                               (fp.found_minus && fp.minus < -guard);
        if (res.warnings.empty() && near_edge)
            res.warnings.push_back("front within 10 cells of the x-boundary at t = " +
                                   std::to_string(st.t));
    };

    record(cur);
    std::vector<char> snap_done(setup.snapshot_times.size(), 0);

    SimState next;
    double next_record = grid.record_dt;
    const int workers = resolve_threads(setup.threads, grid.ny());
    while (cur.t < grid.T - 1e-9) {
        step_into(cur, next, p, setup.f, setup.g, grid, dt, workers);
        std::swap(cur, next);
        if (cur.t >= next_record - 1e-9) {
            record(cur);
            next_record += grid.record_dt;
        }
        for (size_t k = 0; k < setup.snapshot_times.size(); ++k) {
            if (!snap_done[k] && cur.t >= setup.snapshot_times[k] - 1e-9) {
                // keyed by the requested time; the state carries the actual t
                res.snapshots.emplace_back(setup.snapshot_times[k], cur);
                snap_done[k] = 1;
            }
        }
    }

    res.state = std::move(cur);
    return res;
}

}  // namespace roadfield
