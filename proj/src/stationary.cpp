#include "roadfield/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roadfield/errors.hpp"
#include "roadfield/numerics.hpp"

namespace roadfield {

namespace {

constexpr double kZeroTol = 1e-10;   // V considered zero
constexpr double kBlowupCap = 1e3;   // magnitude safety net
constexpr double kDriftTol = 1e-3;   // Hamiltonian drift => step too large
// Saddle distance triggering the analytic tail.  A trajectory bisected to
// |U - U*| ~ eta only passes the saddle at distance ~ sqrt(eta), so the
// window must sit well above sqrt(bisection tol); the clamp then discards an
// unstable component of order window^2.
constexpr double kClampDist = 1e-4;

double default_ymax(const ModelParams& p, const FieldReaction& f) {
    return 50.0 * std::sqrt(p.d / f.f_prime_0());
}

struct Phase {
    double V, W;
};

// one RK4 step of V' = W, W' = -f(V)/d
inline Phase rk4(const FieldReaction& f, double d, Phase s, double h) {
    auto acc = [&](double V) { return -f(V) / d; };
    const double k1v = s.W, k1w = acc(s.V);
    const double k2v = s.W + 0.5 * h * k1w, k2w = acc(s.V + 0.5 * h * k1v);
    const double k3v = s.W + 0.5 * h * k2w, k3w = acc(s.V + 0.5 * h * k2v);
    const double k4v = s.W + h * k3w, k4w = acc(s.V + h * k3v);
    return {s.V + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
            s.W + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)};
}

// decay rate of the stable direction at the saddle (V, W) = (1, 0)
double saddle_rate(const ModelParams& p, const FieldReaction& f) {
    const double slope1 = f.derivative(1.0);
    const double s = slope1 < 0.0 ? -slope1 : f.f_prime_0();
    return std::sqrt(s / p.d);
}

ShotResult integrate(const ModelParams& p, const FieldReaction& f, double V0, double W0,
                     double y_max, double dy) {
    if (!(y_max > 0.0) || !(dy > 0.0))
        throw std::invalid_argument("shoot: y_max and dy must be > 0");

    ShotResult out;
    const long n = std::lround(std::ceil(y_max / dy));
    out.y.reserve(n + 1);
    out.V.reserve(n + 1);
    out.W.reserve(n + 1);
    out.y.push_back(0.0);
    out.V.push_back(V0);
    out.W.push_back(W0);

    if (V0 <= kZeroTol) {
        out.outcome = ShotOutcome::HitsZero;
        out.event_y = 0.0;
        return out;
    }
    if (V0 > 1.0 && W0 > 0.0) {
        out.outcome = ShotOutcome::BlowsUp;
        out.event_y = 0.0;
        return out;
    }

    // incremental antiderivative of f for the Hamiltonian monitor
    const double H0 = p.d * W0 * W0 / 2.0;
    const double drift_scale = std::max(1.0, std::abs(H0));
    const double v_watch = std::max(2.0, V0 + 0.5);
    double F = 0.0;
    Phase s{V0, W0};
    for (long i = 1; i <= n; ++i) {
        const Phase nx = rk4(f, p.d, s, dy);
        const double dv = nx.V - s.V;
        F += dv / 6.0 * (f(s.V) + 4.0 * f(0.5 * (s.V + nx.V)) + f(nx.V));
        out.y.push_back(i * dy);
        out.V.push_back(nx.V);
        out.W.push_back(nx.W);

        if (nx.V <= kZeroTol) {
            out.outcome = ShotOutcome::HitsZero;
            out.event_y = (i - 1) * dy + dy * s.V / (s.V - nx.V);
            return out;
        }
        if ((nx.V > 1.0 && nx.W > 0.0) || nx.V > kBlowupCap) {
            out.outcome = ShotOutcome::BlowsUp;
            out.event_y = i * dy;
            return out;
        }
        if (nx.V >= -0.5 && nx.V <= v_watch) {
            const double drift = std::abs(p.d * nx.W * nx.W / 2.0 + F - H0);
            out.energy_drift = std::max(out.energy_drift, drift);
            if (drift > kDriftTol * drift_scale)
                throw NumericalError("shoot: energy drift check failed (step too large)");
        }
        s = nx;
    }
    out.outcome = ShotOutcome::PositiveBounded;
    out.event_y = y_max;
    return out;
}

// Integrate the profile at road value U, switching to the linearized stable
// tail V = 1 + (V-1)exp(-lambda y) once the trajectory passes close to the
// saddle.  Beyond that point the raw trajectory is dominated by the unstable
// mode excited by the finite bisection tolerance.
StationaryProfile integrate_profile(const ModelParams& p, const RoadReaction& g,
                                    const FieldReaction& f, double U, double y_max, double dy) {
    StationaryProfile prof;
    prof.U = U;
    prof.V0 = (p.mu * U - g(U)) / p.nu;
    prof.V_prime_0 = -g(U) / p.d;

    const long n = std::lround(std::ceil(y_max / dy));
    prof.y.resize(n + 1);
    prof.V.resize(n + 1);
    const double lambda = saddle_rate(p, f);

    Phase s{prof.V0, prof.V_prime_0};
    prof.y[0] = 0.0;
    prof.V[0] = s.V;
    for (long i = 1; i <= n; ++i) {
        const double dist = std::abs(s.V - 1.0) + std::abs(s.W) / lambda;
        if (dist < kClampDist) {
            // analytic relaxation tail from (y_{i-1}, V_{i-1})
            const double yc = (i - 1) * dy;
            const double vc = s.V;
            for (long j = i; j <= n; ++j) {
                prof.y[j] = j * dy;
                prof.V[j] = 1.0 + (vc - 1.0) * std::exp(-lambda * (j * dy - yc));
            }
            prof.converged = true;
            prof.residual = std::abs(prof.V[n] - 1.0);
            return prof;
        }
        s = rk4(f, p.d, s, dy);
        prof.y[i] = i * dy;
        prof.V[i] = s.V;
        if (s.V <= kZeroTol || (s.V > 1.0 && s.W > 0.0) || s.V > kBlowupCap) {
            prof.y.resize(i + 1);
            prof.V.resize(i + 1);
            prof.converged = false;
            prof.residual = std::abs(s.V - 1.0);
            return prof;
        }
    }
    prof.residual = std::abs(prof.V[n] - 1.0);
    prof.converged = prof.residual < 1e-4;
    return prof;
}

bool uniqueness_guaranteed(const ModelParams& p, const RoadReaction& g, const FieldReaction& f) {
    if (g.kind() == RoadReaction::Kind::Zero || g.kind() == RoadReaction::Kind::Mortality)
        return true;
    if (!g.concave()) return false;
    if (f.concave()) return true;
    const double sm = g.S_M();
    return sm <= (p.nu + g(sm)) / p.mu;
}

}  // namespace

double StationaryProfile::value_at(double yy) const {
    if (y.empty()) return 0.0;
    if (yy <= y.front()) return V.front();
    if (yy >= y.back()) return V.back();
    const auto it = std::upper_bound(y.begin(), y.end(), yy);
    const size_t k = it - y.begin();
    const double t = (yy - y[k - 1]) / (y[k] - y[k - 1]);
    return V[k - 1] + t * (V[k] - V[k - 1]);
}

double theta_mortality(const ModelParams& p, const FieldReaction& f, double rho, double sigma) {
    if (!(rho >= 0.0)) throw std::invalid_argument("theta_mortality: rho must be >= 0");
    if (!(sigma >= 0.0 && sigma <= 1.0))
        throw std::invalid_argument("theta_mortality: sigma must lie in [0, 1]");
    const double a = p.nu * rho / (p.mu + rho);
    return a * a * sigma * sigma / (2.0 * p.d) - f.integral(sigma, 1.0);
}

StationaryProfile stationary_mortality(const ModelParams& p, const FieldReaction& f, double rho,
                                       double y_max, double dy) {
    if (!(rho >= 0.0)) throw std::invalid_argument("stationary_mortality: rho must be >= 0");
    if (y_max <= 0.0) y_max = default_ymax(p, f);

    double sigma0 = 1.0;
    if (rho > 0.0) {
        const double th0 = theta_mortality(p, f, rho, 0.0);
        const double th1 = theta_mortality(p, f, rho, 1.0);
        if (!(th0 < 0.0) || !(th1 >= 0.0))
            throw NumericalError("stationary_mortality: theta root not bracketed (invalid f)");
        sigma0 = bisect_root(0.0, 1.0, 1e-15,
                             [&](double s) { return theta_mortality(p, f, rho, s); });
    }

    const RoadReaction g = RoadReaction::mortality(rho);
    const double U = p.nu * sigma0 / (p.mu + rho);
    StationaryProfile prof = integrate_profile(p, g, f, U, y_max, dy);
    if (rho == 0.0) {
        // V identically 1; keep the exact values
        prof.converged = true;
        prof.residual = 0.0;
    }
    return prof;
}

ShotResult shoot(const ModelParams& p, const RoadReaction& g, const FieldReaction& f, double U,
                 double y_max, double dy) {
    if (!(U > 0.0)) throw std::invalid_argument("shoot: U must be > 0");
    if (y_max <= 0.0) y_max = default_ymax(p, f);
    const double V0 = (p.mu * U - g(U)) / p.nu;
    const double W0 = -g(U) / p.d;
    return integrate(p, f, V0, W0, y_max, dy);
}

StationaryProfile find_Ustar(const ModelParams& p, const RoadReaction& g, const FieldReaction& f,
                             double tol, double y_max, double dy, double probe) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_Ustar: tol must be > 0");
    if (y_max <= 0.0) y_max = default_ymax(p, f);
    if (probe <= 0.0) probe = 1e-3 * p.nu / p.mu;

    auto stays_positive = [&](double U) {
        return in_shooting_set(shoot(p, g, f, U, y_max, dy).outcome);
    };

    double lo = 0.0, hi = 0.0;
    if (stays_positive(probe)) {
        hi = probe;
        bool found = false;
        for (int k = 0; k < 60; ++k) {
            const double cand = hi * 0.5;
            if (!stays_positive(cand)) {
                lo = cand;
                found = true;
                break;
            }
            hi = cand;
        }
        if (!found)
            throw NumericalError("find_Ustar: every probed U stays positive "
                                 "(hypothesis violation)");
    } else {
        lo = probe;
        bool found = false;
        for (int k = 0; k < 60; ++k) {
            const double cand = lo * 2.0;
            if (stays_positive(cand)) {
                hi = cand;
                found = true;
                break;
            }
            lo = cand;
        }
        if (!found)
            throw NumericalError("find_Ustar: no positive trajectory found "
                                 "(hypothesis violation)");
    }

    while (hi - lo > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (stays_positive(mid))
            hi = mid;
        else
            lo = mid;
    }

    StationaryProfile prof = integrate_profile(p, g, f, 0.5 * (lo + hi), y_max, dy);
    prof.minimal_candidate = !uniqueness_guaranteed(p, g, f);
    return prof;
}

double theta_general(const ModelParams& p, const RoadReaction& g, const FieldReaction& f,
                     double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("theta_general: sigma must be > 0");
    const double gv = g(sigma);
    const double G = (p.mu * sigma - gv) / p.nu;
    return gv * gv + 2.0 * p.d * f.integral(1.0, G);
}

bool check_bounds(const StationaryProfile& profile, const ModelParams& p, const RoadReaction& g,
                  double tol) {
    if (!profile.converged)
        throw std::invalid_argument("check_bounds: profile did not converge");
    const double s_star = g.S_star();
    const double numu = p.nu / p.mu;
    const double vmax = *std::max_element(profile.V.begin(), profile.V.end());
    const double vmin = *std::min_element(profile.V.begin(), profile.V.end());

    bool ok = true;
    if (s_star <= numu + tol) {
        ok = ok && profile.U >= s_star - tol && profile.U <= numu + tol && vmax <= 1.0 + tol;
    }
    if (s_star >= numu - tol) {
        ok = ok && profile.U >= numu - tol && profile.U <= s_star + tol && vmin >= 1.0 - tol;
    }
    return ok;
}

}  // namespace roadfield
