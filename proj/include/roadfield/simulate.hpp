#ifndef ROADFIELD_SIMULATE_HPP
#define ROADFIELD_SIMULATE_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "roadfield/model.hpp"
#include "roadfield/stationary.hpp"

namespace roadfield {

/// Truncated domain [-Lx, Lx] x [0, Ly], node-centred grid, explicit time
/// stepping.  dt <= 0 selects the stability bound at run time.
struct GridSpec {
    double Lx = 400.0;
    double Ly = 40.0;
    double dx = 0.25;
    double dy = 0.25;
    double dt = 0.0;
    double T = 150.0;
    double record_dt = 1.0;

    int nx() const { return static_cast<int>(std::lround(2.0 * Lx / dx)) + 1; }
    int ny() const { return static_cast<int>(std::lround(Ly / dy)) + 1; }
    double x_at(int i) const { return -Lx + i * dx; }
    double y_at(int j) const { return j * dy; }

    /// Largest monotone explicit step: the update must keep nonnegative
    /// coefficients on every node, including the exchange terms and the
    /// reaction slopes over [0, u_cap] x [0, v_cap].
    double stable_dt(const ModelParams& p, const FieldReaction& f, const RoadReaction& g,
                     double u_cap, double v_cap) const;
};

/// Discretized pair: road density u on the x-grid, field density v on the
/// (x, y)-grid (row-major, v[j*nx + i]).
struct SimState {
    int nx = 0;
    int ny = 0;
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> v;

    double& at(int i, int j) { return v[static_cast<size_t>(j) * nx + i]; }
    double at(int i, int j) const { return v[static_cast<size_t>(j) * nx + i]; }
};

/// Level-crossing positions of the road density over time.
struct FrontSeries {
    double level = 0.5;
    std::vector<double> times;
    std::vector<double> front_plus;   // NaN when the level is nowhere reached
    std::vector<double> front_minus;
    std::vector<double> u_max;
    std::vector<double> mass;
};

struct FrontPair {
    double plus = 0.0;
    double minus = 0.0;
    bool found_plus = false;
    bool found_minus = false;
};

struct SpeedFit {
    double speed = 0.0;
    double stderr_ = 0.0;
    int n = 0;
};

/// Everything one run needs.
struct SimSetup {
    ModelParams params;
    FieldReaction f;
    RoadReaction g;
    GridSpec grid;
    double level = 0.5;
    double fit_window = 0.5;
    double u0_amp = 1.0;
    double u0_halfwidth = 1.0;
    std::vector<double> snapshot_times;
    int threads = 0;  // 0 = hardware concurrency
};

struct RunResult {
    SimState state;
    FrontSeries series;
    StationaryProfile reference;
    std::vector<std::pair<double, SimState>> snapshots;
    std::vector<std::string> warnings;
};

/// Compactly supported default datum: u = amp on |x| <= halfwidth, v = 0.
SimState make_initial(const GridSpec& grid, double amp = 1.0, double halfwidth = 1.0);

/// One explicit Euler update: centred road diffusion, first-order upwind
/// transport, 5-point field Laplacian, second-order ghost row for the
/// exchange flux at y = 0, homogeneous Neumann elsewhere.  Throws
/// NumericalError when a value goes non-finite or beyond 1e6.
SimState step(const SimState& s, const ModelParams& p, const FieldReaction& f,
              const RoadReaction& g, const GridSpec& grid);

/// Integrate to grid.T recording the front series every record_dt.
RunResult run(const SimSetup& setup);

/// Outermost x where u >= level * U_ref, linearly interpolated between cells.
FrontPair front_position(const SimState& s, const GridSpec& grid, double level, double U_ref);
FrontPair front_position(const SimState& s, const GridSpec& grid, double level,
                         const StationaryProfile& reference);

/// Least-squares slope of x(t) over the trailing fit_window fraction of the
/// samples; requires at least 10 valid points in the window.
SpeedFit estimate_speed(const std::vector<double>& times, const std::vector<double>& xs,
                        double fit_window = 0.5);

/// sup over |x| <= window_halfwidth of |u - U| and |v - V(y)|.
double profile_error(const SimState& s, const GridSpec& grid, const StationaryProfile& reference,
                     double window_halfwidth);

}  // namespace roadfield

#endif
