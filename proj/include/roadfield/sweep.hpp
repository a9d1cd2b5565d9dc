#ifndef ROADFIELD_SWEEP_HPP
#define ROADFIELD_SWEEP_HPP

#include <string>
#include <vector>

#include "roadfield/config.hpp"

namespace roadfield {

/// One point of the (D, q, rho) Cartesian sweep grid.  use_rho marks points
/// generated by a rho range (the road is then mortality at that rate);
/// otherwise the configured road reaction applies.
struct SweepPoint {
    double D = 1.0;
    double q = 0.0;
    double rho = 0.0;
    bool use_rho = false;
};

/// Sweep grid in deterministic order: D outermost, then q, then rho.
std::vector<SweepPoint> sweep_points(const RunConfig& c);

/// Critical-speed CSV over the sweep grid, evaluated by a pool of `workers`
/// threads; the row order follows the grid regardless of worker count.
std::string sweep_csv(const RunConfig& c, int workers, double tol);

/// Closed-form threshold CSV over the sweep grid (serial; the predicate is
/// cheap).
std::string thresholds_csv(const RunConfig& c);

}  // namespace roadfield

#endif
