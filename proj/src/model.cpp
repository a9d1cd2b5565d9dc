#include "roadfield/model.hpp"

#include <cmath>
#include <stdexcept>

#include "roadfield/numerics.hpp"

namespace roadfield {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

bool finite(double x) { return std::isfinite(x); }

// Locate S_star = inf{s>0 : g(s)<=0} and S_M = min{s>=0 : g'<=0 beyond} by
// scanning n intervals of [0, smax].  S_star is refined by bisection when a
// sign change is bracketed; S_M is reported at grid resolution.
void scan_road(const std::function<double(double)>& g, double smax, int n, double& s_star,
               double& s_m) {
    const double h = smax / n;
    s_star = smax;  // not found
    bool found = false;
    double prev = g(0.0);
    for (int k = 1; k <= n && !found; ++k) {
        const double s = k * h;
        const double gs = g(s);
        if (gs <= 0.0) {
            if (k == 1) {
                s_star = 0.0;  // nonpositive from the first positive sample
            } else if (prev > 0.0) {
                s_star = bisect_flag((k - 1) * h, s, 1e-12 * smax,
                                     [&](double x) { return g(x) <= 0.0; });
            } else {
                s_star = (k - 1) * h;
            }
            found = true;
        }
        prev = gs;
    }
    // last grid cell on which g still increases
    s_m = 0.0;
    prev = g(0.0);
    for (int k = 1; k <= n; ++k) {
        const double s = k * h;
        const double gs = g(s);
        if (gs > prev) s_m = s;
        prev = gs;
    }
}

}  // namespace

ModelParams::ModelParams(double d_, double D_, double mu_, double nu_, double q_)
    : d(d_), D(D_), mu(mu_), nu(nu_), q(q_) {
    require(finite(d) && d > 0.0, "ModelParams: d must be > 0");
    require(finite(D) && D > 0.0, "ModelParams: D must be > 0");
    require(finite(mu) && mu > 0.0, "ModelParams: mu must be > 0");
    require(finite(nu) && nu > 0.0, "ModelParams: nu must be > 0");
    require(finite(q), "ModelParams: q must be finite");
}

double kpp_speed(double d, double f_prime_0) {
    require(std::isfinite(d) && d > 0.0, "kpp_speed: d must be > 0");
    require(std::isfinite(f_prime_0) && f_prime_0 > 0.0, "kpp_speed: f'(0) must be > 0");
    return 2.0 * std::sqrt(d * f_prime_0);
}

FieldReaction FieldReaction::logistic(double r) {
    require(std::isfinite(r) && r > 0.0, "FieldReaction::logistic: r must be > 0");
    FieldReaction f;
    f.kind_ = Kind::Logistic;
    f.r_ = r;
    f.fp0_ = r;
    f.concave_ = true;
    f.f_ = [r](double s) { return r * s * (1.0 - s); };
    return f;
}

FieldReaction FieldReaction::custom(std::function<double(double)> fn, double f_prime_0,
                                    bool concave) {
    require(static_cast<bool>(fn), "FieldReaction::custom: missing function");
    require(std::isfinite(f_prime_0) && f_prime_0 > 0.0,
            "FieldReaction::custom: f'(0) must be > 0");
    FieldReaction f;
    f.kind_ = Kind::Custom;
    f.f_ = std::move(fn);
    f.fp0_ = f_prime_0;
    f.concave_ = concave;
    return f;
}

double FieldReaction::integral(double a, double b) const {
    if (kind_ == Kind::Logistic) {
        auto F = [this](double s) { return r_ * (s * s / 2.0 - s * s * s / 3.0); };
        return F(b) - F(a);
    }
    return adaptive_simpson(f_, a, b, 1e-10);
}

double FieldReaction::derivative(double s) const {
    if (kind_ == Kind::Logistic) return r_ * (1.0 - 2.0 * s);
    const double h = 1e-6 * std::max(1.0, std::abs(s));
    if (s - h >= 0.0) return (f_(s + h) - f_(s - h)) / (2.0 * h);
    return (f_(s + h) - f_(s)) / h;
}

double FieldReaction::slope_min(double cap) const {
    if (cap < 0.0) cap = 0.0;
    if (kind_ == Kind::Logistic) return r_ * (1.0 - 2.0 * cap);
    double m = derivative(0.0);
    const int n = 1024;
    for (int k = 1; k <= n; ++k) m = std::min(m, derivative(cap * k / n));
    return m;
}

RoadReaction RoadReaction::zero() {
    RoadReaction g;
    g.kind_ = Kind::Zero;
    g.g_ = [](double) { return 0.0; };
    return g;
}

RoadReaction RoadReaction::mortality(double rho) {
    require(std::isfinite(rho) && rho >= 0.0, "RoadReaction::mortality: rho must be >= 0");
    RoadReaction g;
    g.kind_ = Kind::Mortality;
    g.rho_ = rho;
    g.gp0_ = -rho;
    g.g_ = [rho](double u) { return -rho * u; };
    return g;
}

RoadReaction RoadReaction::logistic(double slope, double cap) {
    require(std::isfinite(slope) && slope > 0.0, "RoadReaction::logistic: slope must be > 0");
    require(std::isfinite(cap) && cap > 0.0, "RoadReaction::logistic: cap must be > 0");
    RoadReaction g;
    g.kind_ = Kind::Logistic;
    g.slope_ = slope;
    g.cap_ = cap;
    g.gp0_ = slope;
    g.S_ = cap;
    g.s_star_ = cap;
    g.s_m_ = cap / 2.0;
    g.g_ = [slope, cap](double u) { return slope * u * (1.0 - u / cap); };
    return g;
}

RoadReaction RoadReaction::custom(std::function<double(double)> fn, double g_prime_0, double S,
                                  bool concave) {
    require(static_cast<bool>(fn), "RoadReaction::custom: missing function");
    require(std::isfinite(g_prime_0), "RoadReaction::custom: g'(0) must be finite");
    require(std::isfinite(S) && S > 0.0, "RoadReaction::custom: S must be > 0");
    RoadReaction g;
    g.kind_ = Kind::Custom;
    g.g_ = std::move(fn);
    g.gp0_ = g_prime_0;
    g.S_ = S;
    g.concave_ = concave;
    scan_road(g.g_, std::max(2.0, S), 10000, g.s_star_, g.s_m_);
    return g;
}

double RoadReaction::slope_min(double cap) const {
    if (cap < 0.0) cap = 0.0;
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Mortality:
            return -rho_;
        case Kind::Logistic:
            return slope_ * (1.0 - 2.0 * cap / cap_);
        case Kind::Custom:
            break;
    }
    const int n = 1024;
    const double h = 1e-6 * std::max(1.0, cap);
    double m = (g_(h) - g_(0.0)) / h;
    for (int k = 1; k <= n; ++k) {
        const double s = cap * k / n;
        m = std::min(m, (g_(s + h) - g_(std::max(0.0, s - h))) / (s + h - std::max(0.0, s - h)));
    }
    return m;
}

bool ReactionDiagnostics::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const HypothesisCheck* ReactionDiagnostics::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

ReactionDiagnostics validate_field_reaction(const FieldReaction& f, int n_samples) {
    require(n_samples >= 10, "validate_field_reaction: n_samples must be >= 10");
    const double smax = 2.0;
    const double h = smax / n_samples;

    ReactionDiagnostics diag;
    diag.resolution = h;

    HypothesisCheck at0{"f(0)=0"};
    at0.value = f(0.0);
    at0.pass = std::abs(at0.value) <= 1e-12;
    diag.checks.push_back(at0);

    HypothesisCheck at1{"f(1)=0"};
    at1.sample = 1.0;
    at1.value = f(1.0);
    at1.pass = std::abs(at1.value) <= 1e-12;
    diag.checks.push_back(at1);

    HypothesisCheck pos{"f>0 in (0,1)"};
    HypothesisCheck neg{"f<0 in (1,inf)"};
    HypothesisCheck kpp{"f(s)<=f'(0)s"};
    HypothesisCheck ratio{"f(s)/s nonincreasing"};
    const double fp0 = f.f_prime_0();
    double prev_ratio = fp0;  // limit of f(s)/s at 0+
    for (int k = 1; k <= n_samples; ++k) {
        const double s = k * h;
        const double fs = f(s);
        if (pos.pass && s > 0.0 && s < 1.0 && !(fs > 0.0)) {
            pos.pass = false;
            pos.sample = s;
            pos.value = fs;
        }
        if (neg.pass && s > 1.0 && !(fs < 0.0)) {
            neg.pass = false;
            neg.sample = s;
            neg.value = fs;
        }
        if (kpp.pass && fs > fp0 * s + 1e-12 * std::max(1.0, std::abs(fp0 * s))) {
            kpp.pass = false;
            kpp.sample = s;
            kpp.value = fs;
        }
        const double rat = fs / s;
        if (f.concave() && ratio.pass && rat > prev_ratio + 1e-12) {
            ratio.pass = false;
            ratio.sample = s;
            ratio.value = rat;
        }
        prev_ratio = rat;
    }
    diag.checks.push_back(pos);
    diag.checks.push_back(neg);
    diag.checks.push_back(kpp);
    if (f.concave()) diag.checks.push_back(ratio);
    return diag;
}

ReactionDiagnostics validate_road_reaction(const RoadReaction& g, int n_samples) {
    require(n_samples >= 10, "validate_road_reaction: n_samples must be >= 10");
    const double smax = std::max(2.0, g.S());
    const double h = smax / n_samples;

    ReactionDiagnostics diag;
    diag.resolution = h;

    HypothesisCheck at0{"g(0)=0"};
    at0.value = g(0.0);
    at0.pass = std::abs(at0.value) <= 1e-12;
    diag.checks.push_back(at0);

    HypothesisCheck sink{"exists S>0 with g(S)<=0"};
    sink.pass = false;
    HypothesisCheck ratio{"g(s)/s nonincreasing"};
    double prev_ratio = g.g_prime_0();
    for (int k = 1; k <= n_samples; ++k) {
        const double s = k * h;
        const double gs = g(s);
        if (!sink.pass && gs <= 0.0) {
            sink.pass = true;
            sink.sample = s;
            sink.value = gs;
        }
        const double rat = gs / s;
        if (g.concave() && ratio.pass && rat > prev_ratio + 1e-12) {
            ratio.pass = false;
            ratio.sample = s;
            ratio.value = rat;
        }
        prev_ratio = rat;
    }
    diag.checks.push_back(sink);
    if (g.concave()) diag.checks.push_back(ratio);

    scan_road([&g](double s) { return g(s); }, smax, n_samples, diag.s_star, diag.s_m);
    return diag;
}

}  // namespace roadfield
