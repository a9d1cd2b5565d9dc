#include "roadfield/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "roadfield/csv.hpp"
#include "roadfield/errors.hpp"
#include "roadfield/numerics.hpp"

namespace roadfield {

namespace {

constexpr double kTangencyTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

inline double chi_raw(const ModelParams& p, double beta) {
    return p.d * p.mu * beta / (p.nu + p.d * beta);
}

// beta_lower without the throw, for use inside scans; clamped away from the
// -nu/d pole and capped.
double beta_lower_clamped(const ModelParams& p, double g_prime_0, double c) {
    const double cq = c - p.q;
    const double m = g_prime_0 - cq * cq / (4.0 * p.D);
    if (m >= p.mu) return kInf;  // no real roots at any beta
    double b = p.nu * m / (p.d * (p.mu - m));
    const double floor = -p.nu / p.d * (1.0 - 1e-12);
    if (!(b > floor)) b = floor;
    return std::min(b, 1e12);
}

struct Iv {
    double lo = 0.0, hi = 0.0;
    bool empty = true;
};

inline Iv slab_iv(const ModelParams& p, double g_prime_0, double c, double beta) {
    const double cq = c - p.q;
    const double disc = cq * cq + 4.0 * p.D * (chi_raw(p, beta) - g_prime_0);
    if (disc < 0.0) return {};
    const double s = std::sqrt(disc);
    return {(cq - s) / (2.0 * p.D), (cq + s) / (2.0 * p.D), false};
}

inline Iv disc_iv(const ModelParams& p, double r2_over_4d2, double c, double beta) {
    const double s2 = r2_over_4d2 - beta * beta;
    if (s2 < 0.0) return {};
    const double s = std::sqrt(s2);
    const double mid = c / (2.0 * p.d);
    return {mid - s, mid + s, false};
}

// Signed separation of the two alpha-intervals at fixed beta: <= 0 means they
// overlap.  +inf when either section is empty.
inline double gap_at(const ModelParams& p, double f2, double g_prime_0, double c, double beta) {
    const Iv a = slab_iv(p, g_prime_0, c, beta);
    if (a.empty) return kInf;
    const Iv b = disc_iv(p, f2, c, beta);
    if (b.empty) return kInf;
    return std::max(a.lo, b.lo) - std::min(a.hi, b.hi);
}

struct GapMin {
    double gap = kInf;
    double beta = 0.0;
    double alpha = 0.0;
};

// Minimum of the gap over the admissible beta range at speed c, located by a
// dense scan plus golden-section refinement around the best local minima
// (tangency contact is a point the raw scan can straddle).
GapMin min_gap(const ModelParams& p, double f_prime_0, double g_prime_0, double c, int n) {
    GapMin out;
    const double ck = kpp_speed(p.d, f_prime_0);
    const double r2 = std::max(c * c - ck * ck, 0.0) / (4.0 * p.d * p.d);
    const double r = std::sqrt(r2);
    if (!real_roots_exist(p, g_prime_0, c)) return out;
    const double b0 = std::max(beta_lower_clamped(p, g_prime_0, c), -r);
    const double b1 = r;
    if (b0 > b1) return out;

    auto gap = [&](double beta) { return gap_at(p, r2, g_prime_0, c, beta); };
    auto note = [&](double beta) {
        const double v = gap(beta);
        if (v < out.gap) {
            out.gap = v;
            out.beta = beta;
        }
    };

    if (b1 - b0 <= 0.0) {
        note(b0);
    } else {
        const int m = std::max(n, 16);
        std::vector<double> vals(m + 1);
        const double h = (b1 - b0) / m;
        int best = 0;
        for (int i = 0; i <= m; ++i) {
            vals[i] = gap(b0 + i * h);
            if (vals[i] < vals[best]) best = i;
        }
        // refine the global scan minimum and up to two further local minima
        std::vector<int> seeds{best};
        for (int i = 1; i < m && seeds.size() < 3; ++i) {
            if (i != best && vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] &&
                vals[i] < kInf)
                seeds.push_back(i);
        }
        for (int i : seeds) {
            const double a = std::max(b0, b0 + (i - 1) * h);
            const double b = std::min(b1, b0 + (i + 1) * h);
            note(b0 + i * h);
            if (b > a) note(golden_min(a, b, 1e-13 * std::max(1.0, b1 - b0), gap));
        }
    }

    if (out.gap < kInf) {
        const Iv a = slab_iv(p, g_prime_0, c, out.beta);
        const Iv b = disc_iv(p, r2, c, out.beta);
        if (!a.empty && !b.empty)
            out.alpha = 0.5 * (std::max(a.lo, b.lo) + std::min(a.hi, b.hi));
    }
    return out;
}

}  // namespace

double chi(const ModelParams& p, double beta) {
    if (!(beta > -p.nu / p.d)) throw std::invalid_argument("chi: beta must exceed -nu/d");
    return chi_raw(p, beta);
}

double chi_inv(const ModelParams& p, double m) {
    if (!(m < p.mu)) throw std::invalid_argument("chi_inv: m must be < mu");
    const double b = p.nu * m / (p.d * (p.mu - m));
    if (!std::isfinite(b) || std::abs(b) > 1e12)
        throw std::overflow_error("chi_inv: diverging near the mu asymptote");
    return b;
}

bool real_roots_exist(const ModelParams& p, double g_prime_0, double c) {
    const double cq = c - p.q;
    return cq * cq > 4.0 * p.D * (g_prime_0 - p.mu);
}

double beta_lower(const ModelParams& p, double g_prime_0, double c) {
    if (!real_roots_exist(p, g_prime_0, c))
        throw std::invalid_argument("beta_lower: no real roots at this speed");
    return beta_lower_clamped(p, g_prime_0, c);
}

SlabInterval sigma_interval(const ModelParams& p, double g_prime_0, double c, double beta) {
    if (!(beta > -p.nu / p.d))
        throw std::invalid_argument("sigma_interval: beta must exceed -nu/d");
    const Iv iv = slab_iv(p, g_prime_0, c, beta);
    SlabInterval out;
    out.beta = beta;
    if (!iv.empty) {
        out.lo = iv.lo;
        out.hi = iv.hi;
        out.empty = false;
    }
    return out;
}

SlabInterval circle_interval(const ModelParams& p, double f_prime_0, double c, double beta) {
    const double ck = kpp_speed(p.d, f_prime_0);
    if (c < ck * (1.0 - 1e-12)) throw std::invalid_argument("circle_interval: c must be >= c_K");
    const double r2 = std::max(c * c - ck * ck, 0.0) / (4.0 * p.d * p.d);
    const Iv iv = disc_iv(p, r2, c, beta);
    SlabInterval out;
    out.beta = beta;
    if (!iv.empty) {
        out.lo = iv.lo;
        out.hi = iv.hi;
        out.empty = false;
    }
    return out;
}

bool intersects(const ModelParams& p, double f_prime_0, double g_prime_0, double c,
                int beta_samples) {
    const double ck = kpp_speed(p.d, f_prime_0);
    if (c < ck * (1.0 - 1e-12)) throw std::invalid_argument("intersects: c must be >= c_K");
    return min_gap(p, f_prime_0, g_prime_0, std::max(c, ck), beta_samples).gap <= kTangencyTol;
}

CriticalSpeed critical_speed(const ModelParams& p, double f_prime_0, double g_prime_0,
                             int direction, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("critical_speed: tol must be > 0");
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("critical_speed: direction must be +1 or -1");
    const ModelParams pd = p.with_q(p.q_toward(direction));
    const double ck = kpp_speed(pd.d, f_prime_0);

    CriticalSpeed out;
    out.tol = tol;
    if (intersects(pd, f_prime_0, g_prime_0, ck)) {
        out.w_star = ck;
        out.at_kpp = true;
        return out;
    }

    // bracket: double the offset above c_K until the sets meet
    double lo = ck;
    double hi = 0.0;
    bool bracketed = false;
    const double cap = std::ldexp(ck, 40);
    for (int k = 0; k <= 60; ++k) {
        const double cand = ck + std::ldexp(1.0, k);
        if (cand > cap) break;
        if (intersects(pd, f_prime_0, g_prime_0, cand)) {
            hi = cand;
            bracketed = true;
            break;
        }
        lo = cand;
    }
    if (!bracketed)
        throw NumericalError("critical_speed: no intersection below 2^40 c_K "
                             "(parameter regime error)");

    out.w_star = bisect_flag(lo, hi, tol, [&](double c) {
        return intersects(pd, f_prime_0, g_prime_0, c);
    });
    out.at_kpp = false;
    const GapMin g = min_gap(pd, f_prime_0, g_prime_0, out.w_star, 4096);
    out.witness = DispersionPoint{g.beta, g.alpha};
    return out;
}

CriticalSpeed critical_speed(const ModelParams& p, const FieldReaction& f, const RoadReaction& g,
                             int direction, double tol) {
    return critical_speed(p, f.f_prime_0(), g.g_prime_0(), direction, tol);
}

bool threshold_predicts_ck(const ModelParams& p, double f_prime_0, double g_prime_0,
                           int direction) {
    if (!(f_prime_0 > 0.0))
        throw std::invalid_argument("threshold_predicts_ck: f'(0) must be > 0");
    const double qe = p.q_toward(direction);
    return p.D / p.d <= 2.0 - g_prime_0 / f_prime_0 - qe / std::sqrt(p.d * f_prime_0);
}

double limit_h(const ModelParams& p, double f_prime_0, double g_prime_0, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("limit_h: tol must be > 0");
    // unit road diffusivity, no transport: the rescaled slab
    const ModelParams p1(p.d, 1.0, p.mu, p.nu, 0.0);

    // alpha_1^+ is bounded above by its beta -> inf limit
    auto alpha_sup = [&](double c) {
        return 0.5 * (c + std::sqrt(c * c + std::max(4.0 * (p.mu - g_prime_0), 0.0)));
    };

    auto meets = [&](double c) {
        if (!real_roots_exist(p1, g_prime_0, c)) return false;
        const double b0 = std::max(beta_lower_clamped(p1, g_prime_0, c), 0.0);
        // beyond this beta the parabola sits above every slab point
        const double top = alpha_sup(c) + 1.0;
        const double b1 = std::sqrt(std::max(top * c - f_prime_0, 1.0) / p.d);
        if (b0 >= b1) return false;
        auto gap = [&](double beta) {
            const Iv a = slab_iv(p1, g_prime_0, c, beta);
            if (a.empty) return kInf;
            const double ap = (f_prime_0 + p.d * beta * beta) / c;
            return std::max(a.lo - ap, ap - a.hi);
        };
        const int m = 4096;
        const double h = (b1 - b0) / m;
        double best = kInf;
        int ib = 0;
        for (int i = 0; i <= m; ++i) {
            const double v = gap(b0 + i * h);
            if (v < best) {
                best = v;
                ib = i;
            }
        }
        if (best <= kTangencyTol) return true;
        const double a = std::max(b0, b0 + (ib - 1) * h);
        const double b = std::min(b1, b0 + (ib + 1) * h);
        if (b > a) best = std::min(best, gap(golden_min(a, b, 1e-13 * (b1 - b0), gap)));
        return best <= kTangencyTol;
    };

    double lo = 1.0, hi = 1.0;
    if (meets(1.0)) {
        while (meets(lo)) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-9)
                throw NumericalError("limit_h: no positive lower bracket");
        }
    } else {
        while (!meets(hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e9) throw NumericalError("limit_h: no upper bracket");
        }
    }
    return bisect_flag(lo, hi, tol, meets);
}

double limit_k(const ModelParams& p, double f_prime_0, double g_prime_0) {
    if (!(f_prime_0 > 0.0)) throw std::invalid_argument("limit_k: f'(0) must be > 0");
    if (g_prime_0 >= p.mu) return 1.0;

    auto phi = [&](double beta) {
        return (chi_raw(p, beta) - g_prime_0) / (f_prime_0 + p.d * beta * beta);
    };
    // a positive starting value: chi exceeds g'(0) from chi^{-1}(g'(0)) on
    double b_pos = 1.0;
    if (g_prime_0 > 0.0) {
        const double m = 0.5 * (g_prime_0 + p.mu);
        b_pos = p.nu * m / (p.d * (p.mu - m));
    }
    double m0 = phi(b_pos);
    for (int k = 0; k < 60 && m0 <= 0.0; ++k) {
        b_pos *= 2.0;
        m0 = phi(b_pos);
    }
    if (m0 <= 0.0) throw NumericalError("limit_k: no positive ratio found");

    // maximizers live below the beta where even chi = mu cannot beat m0
    const double bcap = std::sqrt((p.mu - g_prime_0) / (p.d * m0)) + b_pos;
    const int n = 4096;
    double best = m0;
    int ib = -1;
    for (int i = 0; i <= n; ++i) {
        const double v = phi(bcap * i / n);
        if (v > best) {
            best = v;
            ib = i;
        }
    }
    auto neg = [&](double beta) { return -phi(beta); };
    if (ib >= 0) {
        const double a = bcap * std::max(0, ib - 1) / n;
        const double b = bcap * std::min(n, ib + 1) / n;
        best = std::max(best, phi(golden_min(a, b, 1e-14 * bcap, neg)));
    } else {
        const double b = std::min(bcap, 2.0 * b_pos);
        best = std::max(best, phi(golden_min(0.0, b, 1e-14 * bcap, neg)));
    }
    return 1.0 / (1.0 + best);
}

LimitConstants limit_constants(const ModelParams& p, double f_prime_0, double g_prime_0) {
    return {limit_h(p, f_prime_0, g_prime_0), limit_k(p, f_prime_0, g_prime_0)};
}

std::string speed_csv_header() {
    return "d,D,mu,nu,q,fp0,gp0,direction,w_star,at_kpp,beta_star,alpha_star";
}

std::string speed_csv_row(const ModelParams& p, double f_prime_0, double g_prime_0, int direction,
                          const CriticalSpeed& cs) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::string row;
    row += csv_num(p.d) + ',' + csv_num(p.D) + ',' + csv_num(p.mu) + ',' + csv_num(p.nu) + ',' +
           csv_num(p.q) + ',';
    row += csv_num(f_prime_0) + ',' + csv_num(g_prime_0) + ',';
    row += std::to_string(direction) + ',';
    row += csv_num(cs.w_star) + ',';
    row += cs.at_kpp ? "true," : "false,";
    row += csv_num(cs.witness ? cs.witness->beta : nan) + ',';
    row += csv_num(cs.witness ? cs.witness->alpha : nan);
    return row;
}

}  // namespace roadfield
