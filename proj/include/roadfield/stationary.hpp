#ifndef ROADFIELD_STATIONARY_HPP
#define ROADFIELD_STATIONARY_HPP

#include <vector>

#include "roadfield/model.hpp"

namespace roadfield {

/// The x-independent stationary pair (U, V(y)): constant road density U and
/// field profile V sampled on an increasing y-grid.  The boundary relations
/// nu*V(0) = mu*U - g(U) and -d*V'(0) = g(U) hold by construction.
struct StationaryProfile {
    double U = 0.0;
    double V0 = 0.0;
    double V_prime_0 = 0.0;
    std::vector<double> y;
    std::vector<double> V;
    bool converged = false;    ///< the profile relaxes to 1 within tolerance
    double residual = 0.0;     ///< |V(y_end) - 1|
    bool minimal_candidate = false;  ///< set when uniqueness is not guaranteed

    /// Linear interpolation of V at height yy (clamped to the grid range).
    double value_at(double yy) const;
};

enum class ShotOutcome {
    PositiveBounded,  ///< stayed positive through y_max with no escape
    HitsZero,         ///< reached V <= 0 at a finite height
    BlowsUp,          ///< escape certified: V > 1 with V' > 0 (or magnitude cap)
};

/// Membership in the shooting set: every outcome that never touches zero.
inline bool in_shooting_set(ShotOutcome o) { return o != ShotOutcome::HitsZero; }

struct ShotResult {
    ShotOutcome outcome = ShotOutcome::PositiveBounded;
    double event_y = 0.0;  ///< zero crossing / escape location; y_max when none
    std::vector<double> y, V, W;
    double energy_drift = 0.0;  ///< max |H(y) - H(0)| over the monitored window
};

/// theta(sigma) = nu^2 rho^2 sigma^2 / (2 d (mu+rho)^2) - int_sigma^1 f,
/// whose unique root on (0, 1] is the stationary boundary value V(0) in the
/// pure-mortality case.  Requires 0 <= sigma <= 1.
double theta_mortality(const ModelParams& p, const FieldReaction& f, double rho, double sigma);

/// Stationary solution for g(u) = -rho*u via the theta-root: V(0) = sigma_0,
/// U = nu*sigma_0/(mu+rho), V'(0) = nu*rho*sigma_0/(d*(mu+rho)).
/// y_max <= 0 selects the default 50*sqrt(d/f'(0)).
StationaryProfile stationary_mortality(const ModelParams& p, const FieldReaction& f, double rho,
                                       double y_max = 0.0, double dy = 1e-3);

/// Integrate -d V'' = f(V) from V(0) = (mu U - g(U))/nu, V'(0) = -g(U)/d by
/// RK4 with fixed step dy, classifying the trajectory.  Throws NumericalError
/// when the Hamiltonian d(V')^2/2 + F(V) drifts (step too large).
ShotResult shoot(const ModelParams& p, const RoadReaction& g, const FieldReaction& f, double U,
                 double y_max = 0.0, double dy = 1e-3);

/// Locate U* = inf{ U > 0 : V_U stays positive } by bisection between a
/// zero-hitting and a positive trajectory (bracket found by geometric scan
/// from the probe value), and integrate the profile there.  tol is relative
/// on U.  probe <= 0 selects the default nu/(1000 mu).
StationaryProfile find_Ustar(const ModelParams& p, const RoadReaction& g, const FieldReaction& f,
                             double tol = 1e-12, double y_max = 0.0, double dy = 1e-3,
                             double probe = 0.0);

/// theta(sigma) = g(sigma)^2 + 2 d int_1^{G(sigma)} f with
/// G(sigma) = (mu sigma - g(sigma))/nu; vanishes at the stationary road value.
/// Requires sigma > 0.
double theta_general(const ModelParams& p, const RoadReaction& g, const FieldReaction& f,
                     double sigma);

/// Structural bounds of the stationary pair: S* <= nu/mu forces
/// S* <= U <= nu/mu and V <= 1; S* >= nu/mu forces the reverse.  Checked to
/// the given tolerance on a converged profile.
bool check_bounds(const StationaryProfile& profile, const ModelParams& p, const RoadReaction& g,
                  double tol = 1e-6);

}  // namespace roadfield

#endif
