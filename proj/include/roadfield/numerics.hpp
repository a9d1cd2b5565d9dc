#ifndef ROADFIELD_NUMERICS_HPP
#define ROADFIELD_NUMERICS_HPP

#include <cmath>
#include <utility>

#include "roadfield/errors.hpp"

namespace roadfield {

/// Bisection on a boolean predicate: pred(lo) must be false, pred(hi) true,
/// and the predicate monotone in between.  Returns the true-side endpoint
/// once the bracket is narrower than tol.
template <class Pred>
double bisect_flag(double lo, double hi, double tol, Pred&& pred) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket exhausted in double precision
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

/// Sign-change bisection for a continuous f with f(lo) and f(hi) of opposite
/// sign (either orientation).  Returns the midpoint of the final bracket.
template <class F>
double bisect_root(double lo, double hi, double tol, F&& f) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0)) throw NumericalError("bisect_root: root not bracketed");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (fhi > 0)) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

/// Golden-section minimization of a unimodal f on [a, b]; returns the argmin.
template <class F>
double golden_min(double a, double b, double tol, F&& f) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

namespace detail {
template <class F>
double simpson_rec(F& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] (a > b allowed, sign flips).
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10) {
    if (a == b) return 0.0;
    const double sign = a < b ? 1.0 : -1.0;
    if (a > b) std::swap(a, b);
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return sign * detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace roadfield

#endif
