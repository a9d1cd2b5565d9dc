#ifndef ROADFIELD_MODEL_HPP
#define ROADFIELD_MODEL_HPP

#include <functional>
#include <string>
#include <vector>

namespace roadfield {

/// Physical constants of the road-field system.  The road (the line y = 0)
/// carries diffusivity D and a signed transport q; the field (the upper
/// half-plane) diffuses with d.  mu*u is the rate at which mass leaves the
/// road into the field, nu*v(x,0) the rate at which it joins the road.
/// All values are immutable after construction and safe to share.
struct ModelParams {
    double d;   ///< field diffusivity, > 0
    double D;   ///< road diffusivity, > 0
    double mu;  ///< road -> field exchange rate, > 0
    double nu;  ///< field -> road exchange rate, > 0
    double q;   ///< road transport, signed

    ModelParams(double d_, double D_, double mu_, double nu_, double q_ = 0.0);

    /// Transport seen by a front moving toward +e1 (direction=+1) or -e1
    /// (direction=-1): propagation to the left is the same problem with q
    /// negated.
    double q_toward(int direction) const { return direction < 0 ? -q : q; }

    ModelParams with_q(double q_) const {
        ModelParams p(*this);
        p.q = q_;
        return p;
    }
    ModelParams with_D(double D_) const {
        ModelParams p(*this);
        p.D = D_;
        return p;
    }
};

/// KPP invasion speed 2*sqrt(d*f'(0)) of the field alone.
double kpp_speed(double d, double f_prime_0);

/// Field nonlinearity f: KPP type, f(0)=f(1)=0, positive on (0,1), negative
/// beyond 1, below its tangent at 0.
class FieldReaction {
  public:
    enum class Kind { Logistic, Custom };

    /// f(s) = r*s*(1-s) with f'(0) = r > 0.
    static FieldReaction logistic(double r);

    /// Arbitrary nonlinearity with known slope at 0.  The concave flag
    /// declares that s -> f(s)/s is nonincreasing; it is checked by the
    /// validator and consumed by the uniqueness guarantees downstream.
    static FieldReaction custom(std::function<double(double)> f, double f_prime_0,
                                bool concave = false);

    double operator()(double s) const { return f_(s); }
    double f_prime_0() const { return fp0_; }
    Kind kind() const { return kind_; }
    bool concave() const { return concave_; }

    /// Definite integral of f over [a, b]; exact for the logistic kind,
    /// adaptive Simpson (tol 1e-10) otherwise.
    double integral(double a, double b) const;

    /// df/ds; analytic for the logistic kind, central difference otherwise.
    double derivative(double s) const;

    /// min of f' over [0, cap]; used by explicit-scheme stability bounds.
    double slope_min(double cap) const;

  private:
    FieldReaction() = default;
    Kind kind_ = Kind::Logistic;
    std::function<double(double)> f_;
    double fp0_ = 1.0;
    double r_ = 1.0;
    bool concave_ = true;
};

/// Road nonlinearity g: g(0) = 0 and g(S) <= 0 for some S > 0.  g'(0) may be
/// negative (pure mortality g = -rho*u) or positive (reproduction on the
/// road).
class RoadReaction {
  public:
    enum class Kind { Zero, Mortality, Logistic, Custom };

    static RoadReaction zero();
    /// g(u) = -rho*u, rho >= 0.
    static RoadReaction mortality(double rho);
    /// g(u) = slope*u*(1 - u/cap), slope > 0, cap > 0.
    static RoadReaction logistic(double slope, double cap);
    /// Arbitrary nonlinearity; S is a point with g(S) <= 0.  S_star and S_M
    /// are located by a sample scan on [0, max(2, S)].
    static RoadReaction custom(std::function<double(double)> g, double g_prime_0, double S,
                               bool concave = false);

    double operator()(double u) const { return g_(u); }
    double g_prime_0() const { return gp0_; }
    Kind kind() const { return kind_; }
    bool concave() const { return concave_; }

    /// Mortality rate; zero for the other kinds.
    double rho() const { return rho_; }
    /// A point with g(S) <= 0.
    double S() const { return S_; }
    /// inf{ S > 0 : g(S) <= 0 }; analytic for built-ins, scanned for custom.
    double S_star() const { return s_star_; }
    /// min{ s >= 0 : g' <= 0 on [s, inf) }.
    double S_M() const { return s_m_; }

    /// min of g' over [0, cap].
    double slope_min(double cap) const;

  private:
    RoadReaction() = default;
    Kind kind_ = Kind::Zero;
    std::function<double(double)> g_;
    double gp0_ = 0.0;
    double rho_ = 0.0;
    double S_ = 1.0;
    double s_star_ = 0.0;
    double s_m_ = 0.0;
    double slope_ = 0.0;  // logistic kind
    double cap_ = 1.0;    // logistic kind
    bool concave_ = true;
};

/// One hypothesis verdict.  When a check fails, sample/value hold the first
/// violating sample point and the value observed there.
struct HypothesisCheck {
    std::string name;
    bool pass = true;
    double sample = 0.0;
    double value = 0.0;
};

struct ReactionDiagnostics {
    std::vector<HypothesisCheck> checks;
    double s_star = 0.0;      ///< scanned inf{S>0 : g(S)<=0} (road only)
    double s_m = 0.0;         ///< scanned min{s>=0 : g'<=0 beyond} (road only)
    double resolution = 0.0;  ///< sample grid spacing

    bool all_pass() const;
    const HypothesisCheck* find(const std::string& name) const;
};

/// Check the KPP hypotheses for f on a sample grid over [0, 2].
/// n_samples must be >= 10.
ReactionDiagnostics validate_field_reaction(const FieldReaction& f, int n_samples = 10000);

/// Check the road hypotheses for g on a sample grid over [0, max(2, S)], and
/// locate S_star and S_M within the grid resolution.
ReactionDiagnostics validate_road_reaction(const RoadReaction& g, int n_samples = 10000);

}  // namespace roadfield

#endif
