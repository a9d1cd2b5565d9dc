#ifndef ROADFIELD_DISPERSION_HPP
#define ROADFIELD_DISPERSION_HPP

#include <optional>
#include <string>

#include "roadfield/model.hpp"

namespace roadfield {

/// A point of the (beta, alpha) exponent plane: beta is the y-decay rate of
/// the field profile, alpha the x-decay rate of the wave.
struct DispersionPoint {
    double beta = 0.0;
    double alpha = 0.0;
};

/// The alpha-interval of a slab or disc section at fixed beta.
struct SlabInterval {
    double beta = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool empty = true;

    double width() const { return empty ? 0.0 : hi - lo; }
};

/// Result of the critical plane-wave speed computation.
struct CriticalSpeed {
    double w_star = 0.0;
    bool at_kpp = false;  ///< w_star equals the bare KPP speed
    std::optional<DispersionPoint> witness;  ///< contact point when w_star > c_K
    double tol = 0.0;     ///< bisection tolerance used
};

/// Scaling constants of the large-D and large-q regimes: w* ~ h*sqrt(D) as
/// D -> inf and w* ~ k*q as q -> +inf.
struct LimitConstants {
    double h = 0.0;
    double k = 0.0;
};

/// chi(beta) = d*mu*beta/(nu + d*beta), increasing on (-nu/d, inf) with
/// supremum mu.  Rejects beta <= -nu/d.
double chi(const ModelParams& p, double beta);

/// Inverse of chi; defined for m < mu, rejects m >= mu.  Throws
/// std::overflow_error when the result exceeds 1e12 (the asymptote at mu).
double chi_inv(const ModelParams& p, double m);

/// True iff (c-q)^2 > 4 D (g'(0) - mu), i.e. the road equation has real
/// exponent roots for some beta.
bool real_roots_exist(const ModelParams& p, double g_prime_0, double c);

/// Smallest beta with real road roots at speed c: chi^{-1}(g'(0)-(c-q)^2/4D),
/// clamped near -nu/d.  Requires real_roots_exist.
double beta_lower(const ModelParams& p, double g_prime_0, double c);

/// alpha-interval [alpha_D^-, alpha_D^+] of the road slab at (c, beta);
/// flagged empty when the discriminant is negative (beta below beta_lower).
SlabInterval sigma_interval(const ModelParams& p, double g_prime_0, double c, double beta);

/// alpha-interval of the field disc at (c, beta): the chord of the circle of
/// centre (0, c/2d) and radius sqrt(c^2-c_K^2)/2d.  Requires c >= c_K.
SlabInterval circle_interval(const ModelParams& p, double f_prime_0, double c, double beta);

/// True iff the slab and the disc meet at speed c: a dense beta scan
/// (beta_samples points) of the signed gap followed by local refinement.
/// Requires c >= c_K.
bool intersects(const ModelParams& p, double f_prime_0, double g_prime_0, double c,
                int beta_samples = 4096);

/// Critical plane-wave speed toward +e1 (direction=+1) or -e1 (direction=-1):
/// the least c >= c_K at which the slab meets the disc, located by bisection.
CriticalSpeed critical_speed(const ModelParams& p, double f_prime_0, double g_prime_0,
                             int direction, double tol = 1e-8);
CriticalSpeed critical_speed(const ModelParams& p, const FieldReaction& f, const RoadReaction& g,
                             int direction, double tol = 1e-8);

/// Closed-form threshold: true iff D/d <= 2 - g'(0)/f'(0) -+ q/sqrt(d f'(0))
/// (sign chosen by direction), which is equivalent to w* = c_K.
bool threshold_predicts_ck(const ModelParams& p, double f_prime_0, double g_prime_0,
                           int direction);

/// Large-diffusion scaling constant: the least c > 0 at which the unit-D,
/// zero-q slab meets the parabola alpha = (f'(0)+d beta^2)/c.  Independent of
/// q and D by construction.
double limit_h(const ModelParams& p, double f_prime_0, double g_prime_0, double tol = 1e-10);

/// Large-transport scaling constant: 1 when g'(0) >= mu, otherwise
/// (1 + max_{beta>=0} (chi(beta)-g'(0))/(f'(0)+d beta^2))^{-1} in (0,1).
double limit_k(const ModelParams& p, double f_prime_0, double g_prime_0);

LimitConstants limit_constants(const ModelParams& p, double f_prime_0, double g_prime_0);

/// CSV serialization of a critical-speed result.
std::string speed_csv_header();
std::string speed_csv_row(const ModelParams& p, double f_prime_0, double g_prime_0, int direction,
                          const CriticalSpeed& cs);

}  // namespace roadfield

#endif
