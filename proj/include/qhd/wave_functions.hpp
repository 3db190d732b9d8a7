#pragma once

// Nonlinearities, antiderivatives, energies and the Lyapunov function of the
// two profile equations:
//
//   linear viscosity     P'' = (2/k^2) f(P) - (2 s mu / k^2) P' + P'^2 / P
//   nonlinear viscosity  V'' = g(V) / k^2            (standing waves, rho = V^2)
//
// Antiderivatives F and G are the indefinite integrals without a constant;
// every consumer works with differences F(P) - F(ref), G(V) - G(ref).
// Near P -> 0 (V -> 0) they diverge and return +/-inf without clamping.

#include <algorithm>
#include <cmath>
#include <string>

#include "qhd/errors.hpp"
#include "qhd/model.hpp"
#include "qhd/rankine_hugoniot.hpp"

namespace qhd {

/// Value and first two derivatives of a scalar function at a point.
struct Jet {
    double value;
    double d1;
    double d2;
};

enum class EndState { Minus, Plus };

inline const char* to_string(EndState e) { return e == EndState::Minus ? "minus" : "plus"; }

// ---------------------------------------------------------------------------
// Linear viscosity

/// Travelling-wave (or s = 0 standing-wave) profile system in (P, Q = P').
struct LinearWaveSystem {
    double A;  ///< s P - J, equal at both end states
    double B;  ///< -s J + J^2/P + P^gamma at either end state
    double s;
    ModelParams params;
    double p_minus;
    double p_plus;

    double flux_constant() const { return A * s + B; }
    bool standing() const { return p_plus == p_minus; }
    /// Larger root of f: the saddle of the profile flow, where the loop is based.
    double saddle_state() const { return std::max(p_plus, p_minus); }
    /// Smaller root of f: the attracting state of a heteroclinic connection.
    double inner_state() const { return std::min(p_plus, p_minus); }
    double reference(EndState e) const { return e == EndState::Minus ? p_minus : p_plus; }
};

inline Jet f_family(const LinearWaveSystem& sys, double P)
{
    detail::require_positive(P, "f_family");
    const double g = sys.params.gamma();
    const double a2 = sys.A * sys.A;
    const double pg = std::pow(P, g);
    return {pg - sys.flux_constant() + a2 / P,
            g * pg / P - a2 / (P * P),
            g * (g - 1.0) * pg / (P * P) + 2.0 * a2 / (P * P * P)};
}

/// f written through the end states only:
/// P^g + P+P- q_g / P - q_{g+1}, q_e = ((P+)^e - (P-)^e) / (P+ - P-).
inline double f_end_states(const LinearWaveSystem& sys, double P)
{
    detail::require_positive(P, "f_end_states");
    const double g = sys.params.gamma();
    const double d1 = power_difference_quotient(sys.p_plus, sys.p_minus, g + 1.0);
    const double d2 = sys.p_plus * sys.p_minus * power_difference_quotient(sys.p_plus, sys.p_minus, g);
    return std::pow(P, g) + d2 / P - d1;
}

/// F(P) = (2/k^2) integral^P f(z)/z^2 dz.
inline double F_eval(const LinearWaveSystem& sys, double P)
{
    detail::require_positive(P, "F_eval");
    const double g = sys.params.gamma();
    const double k2 = sys.params.k() * sys.params.k();
    const double lead = sys.params.isothermal() ? std::log(P) : std::pow(P, g - 1.0) / (g - 1.0);
    return 2.0 / k2 * (lead + sys.flux_constant() / P - sys.A * sys.A / (2.0 * P * P));
}

/// F in the end-state form with d1 = q_{g+1}, d2 = P+P- q_g.
inline double F_end_states(const LinearWaveSystem& sys, double P)
{
    detail::require_positive(P, "F_end_states");
    const double g = sys.params.gamma();
    const double k2 = sys.params.k() * sys.params.k();
    const double d1 = power_difference_quotient(sys.p_plus, sys.p_minus, g + 1.0);
    const double d2 = sys.p_plus * sys.p_minus * power_difference_quotient(sys.p_plus, sys.p_minus, g);
    const double lead = sys.params.isothermal() ? std::log(P) : std::pow(P, g - 1.0) / (g - 1.0);
    return 2.0 / k2 * (lead + d1 / P - d2 / (2.0 * P * P));
}

/// H(P, Q) = F(P) - (Q/P)^2 / 2 - F(P_ref). Conserved by the flow without the
/// viscous term; along the full flow dH/dy = (2 s mu / k^2)(Q/P)^2.
inline double energy_H(const LinearWaveSystem& sys, double P, double Q, EndState ref)
{
    detail::require_positive(P, "energy_H");
    const double qp = Q / P;
    return F_eval(sys, P) - 0.5 * qp * qp - F_eval(sys, sys.reference(ref));
}

/// L(P, Q) = (Q/P)^2 / 2 - F(P) + F(P+); nonincreasing along the full flow for s > 0.
inline double lyapunov_L(const LinearWaveSystem& sys, double P, double Q)
{
    detail::require_positive(P, "lyapunov_L");
    const double qp = Q / P;
    return 0.5 * qp * qp - F_eval(sys, P) + F_eval(sys, sys.p_plus);
}

/// J(y) = s P(y) - A.
inline double momentum_profile(const LinearWaveSystem& sys, double P) { return sys.s * P - sys.A; }

inline LinearWaveSystem build_linear_system(const ShockData& sh, const ModelParams& params,
                                            double rel_tol = 1e-12)
{
    detail::require_positive(sh.p_plus, "build_linear_system");
    detail::require_positive(sh.p_minus, "build_linear_system");
    const double g = params.gamma();

    const double a_plus = sh.s * sh.p_plus - sh.j_plus;
    const double a_minus = sh.s * sh.p_minus - sh.j_minus;
    const double a_scale = std::max({1.0, std::abs(sh.s) * std::max(sh.p_plus, sh.p_minus),
                                     std::abs(sh.j_plus), std::abs(sh.j_minus)});
    const double A = 0.5 * (a_plus + a_minus);

    if (sh.p_plus != sh.p_minus && std::abs(A) <= rel_tol * a_scale)
        throw ZeroMassFlux("A = sP - J vanishes for distinct end states; no RH-consistent shock has J = sP");
    if (std::abs(a_plus - a_minus) > rel_tol * a_scale)
        throw InconsistentInput("A differs between end states: " + std::to_string(a_plus) + " vs " +
                                std::to_string(a_minus));

    auto b_of = [&](double p, double j) { return -sh.s * j + j * j / p + std::pow(p, g); };
    const double b_plus = b_of(sh.p_plus, sh.j_plus);
    const double b_minus = b_of(sh.p_minus, sh.j_minus);
    const double b_scale = std::max({1.0, std::abs(b_plus), std::abs(b_minus),
                                     std::pow(std::max(sh.p_plus, sh.p_minus), g)});
    if (std::abs(b_plus - b_minus) > rel_tol * b_scale)
        throw InconsistentInput("B differs between end states: " + std::to_string(b_plus) + " vs " +
                                std::to_string(b_minus));

    LinearWaveSystem sys{A, 0.5 * (b_plus + b_minus), sh.s, params, sh.p_minus, sh.p_plus};

    for (double p : {sh.p_plus, sh.p_minus}) {
        const double scale = std::max({std::pow(p, g), std::abs(sys.flux_constant()), A * A / p});
        if (std::abs(f_family(sys, p).value) > 1e3 * rel_tol * scale)
            throw InconsistentInput("end state is not a root of f");
    }
    return sys;
}

/// Standing-wave (s = 0, equal end states) linear-viscosity system.
inline LinearWaveSystem build_linear_standing_system(double p_plus, double u_plus, const ModelParams& params)
{
    detail::require_positive(p_plus, "build_linear_standing_system");
    const double j = p_plus * u_plus;
    return build_linear_system({p_plus, p_plus, j, j, 0.0}, params);
}

// ---------------------------------------------------------------------------
// Nonlinear viscosity

/// Standing-wave system in (V, W = V') with rho = V^2, U = -C1 / V^2.
struct StandingSystem {
    double C1;
    double C2;
    double v_plus;
    double v_minus;
    ModelParams params;

    bool standing() const { return v_plus == v_minus; }
    double saddle_state() const { return std::max(v_plus, v_minus); }
    double inner_state() const { return std::min(v_plus, v_minus); }
};

inline StandingSystem build_standing_system(double rho_plus, double u_plus, const ModelParams& params)
{
    detail::require_positive(rho_plus, "build_standing_system");
    const double v = std::sqrt(rho_plus);
    const double c1 = -u_plus * rho_plus;
    const double c2 = -0.5 * u_plus * u_plus - enthalpy(rho_plus, params.gamma());
    return {c1, c2, v, v, params};
}

/// System fixed by two distinct end densities through the RH relations of the
/// (rho, u) formulation. C1 is taken with the sign of a positive velocity.
inline StandingSystem standing_system_from_end_states(double rho_plus, double rho_minus,
                                                      const ModelParams& params)
{
    detail::require_positive(rho_plus, "standing_system_from_end_states");
    detail::require_positive(rho_minus, "standing_system_from_end_states");
    if (rho_plus == rho_minus)
        throw DegenerateInput("standing_system_from_end_states: equal end states");
    const double g = params.gamma();
    const double h_plus = enthalpy(rho_plus, g);
    const double h_minus = enthalpy(rho_minus, g);
    // (h+ - h-) / (rho+ - rho-)
    const double dh = params.isothermal()
                          ? std::log1p((rho_plus - rho_minus) / rho_minus) / (rho_plus - rho_minus)
                          : g / (g - 1.0) * power_difference_quotient(rho_plus, rho_minus, g - 1.0);
    const double half_c1_sq = dh * (rho_plus * rho_minus) * (rho_plus * rho_minus) / (rho_plus + rho_minus);
    const double c2 = (h_minus * rho_minus * rho_minus - h_plus * rho_plus * rho_plus) /
                      ((rho_plus - rho_minus) * (rho_plus + rho_minus));
    return {-std::sqrt(2.0 * half_c1_sq), c2, std::sqrt(rho_plus), std::sqrt(rho_minus), params};
}

inline Jet g_family(const StandingSystem& sys, double V)
{
    detail::require_positive(V, "g_family");
    const double g = sys.params.gamma();
    const double c1sq = sys.C1 * sys.C1;
    const double v2 = V * V;
    const double v4 = v2 * v2;
    const double v5 = v4 * V;
    const double h = enthalpy(v2, g);
    const double value = (0.5 * c1sq / v4 + h + sys.C2) * V;
    if (sys.params.isothermal())
        return {value, -1.5 * c1sq / v4 + std::log(v2) + 2.0 + sys.C2, 6.0 * c1sq / v5 + 2.0 / V};
    const double vp = std::pow(V, 2.0 * (g - 1.0));
    return {value, -1.5 * c1sq / v4 + g * (2.0 * g - 1.0) / (g - 1.0) * vp + sys.C2,
            6.0 * c1sq / v5 + 2.0 * g * (2.0 * g - 1.0) * vp / V};
}

/// G(V) = (1/k^2) integral^V g(z) dz.
inline double G_eval(const StandingSystem& sys, double V)
{
    detail::require_positive(V, "G_eval");
    const double g = sys.params.gamma();
    const double k2 = sys.params.k() * sys.params.k();
    const double c1sq = sys.C1 * sys.C1;
    const double v2 = V * V;
    if (sys.params.isothermal())
        return (-c1sq / (4.0 * v2) + 0.5 * (sys.C2 - 1.0) * v2 + 0.5 * v2 * std::log(v2)) / k2;
    return (-c1sq / v2 + 2.0 * sys.C2 * v2 + 2.0 / (g - 1.0) * std::pow(V, 2.0 * g)) / (4.0 * k2);
}

/// H1(V, W) = G(V) - W^2/2 - G(V+); conserved by V' = W, W' = g(V)/k^2.
inline double energy_H1(const StandingSystem& sys, double V, double W)
{
    detail::require_positive(V, "energy_H1");
    return G_eval(sys, V) - 0.5 * W * W - G_eval(sys, sys.v_plus);
}

/// U = -C1 / V^2.
inline double velocity_profile(const StandingSystem& sys, double V)
{
    detail::require_positive(V, "velocity_profile");
    return -sys.C1 / (V * V);
}

// ---------------------------------------------------------------------------
// Uniform access used by the structural analysis and orbit construction.
// "Potential" is F or G; the restoring jet is f or g; the conservative flow
// and its zero-energy branch are those of the reduced (inviscid) system.

inline Jet restoring_jet(const LinearWaveSystem& sys, double x) { return f_family(sys, x); }
inline Jet restoring_jet(const StandingSystem& sys, double x) { return g_family(sys, x); }

inline double potential(const LinearWaveSystem& sys, double x) { return F_eval(sys, x); }
inline double potential(const StandingSystem& sys, double x) { return G_eval(sys, x); }

/// Coefficient of (x - x_eq) in the linearised second equation: 2f'/k^2 or g'/k^2.
inline double linear_coefficient(const LinearWaveSystem& sys, double d1)
{
    return 2.0 * d1 / (sys.params.k() * sys.params.k());
}
inline double linear_coefficient(const StandingSystem& sys, double d1)
{
    return d1 / (sys.params.k() * sys.params.k());
}

/// Energy of the inviscid flow measured from the saddle-based loop level.
inline double loop_energy(const LinearWaveSystem& sys, double x, double w)
{
    const double qp = w / x;
    return F_eval(sys, x) - 0.5 * qp * qp - F_eval(sys, sys.saddle_state());
}
inline double loop_energy(const StandingSystem& sys, double x, double w)
{
    return G_eval(sys, x) - 0.5 * w * w - G_eval(sys, sys.saddle_state());
}

/// Nonnegative branch of the zero level set of loop_energy through x, or NaN
/// where the level set has no point above x.
inline double zero_level_branch(const LinearWaveSystem& sys, double x)
{
    const double diff = F_eval(sys, x) - F_eval(sys, sys.saddle_state());
    if (diff < 0.0)
        return std::nan("");
    return x * std::sqrt(2.0 * diff);
}
inline double zero_level_branch(const StandingSystem& sys, double x)
{
    const double diff = G_eval(sys, x) - G_eval(sys, sys.saddle_state());
    if (diff < 0.0)
        return std::nan("");
    return std::sqrt(2.0 * diff);
}

/// Magnitude scale of the restoring derivative at x, used for "is it zero" tests.
inline double derivative_scale(const LinearWaveSystem& sys, double x)
{
    const double g = sys.params.gamma();
    return std::max(g * std::pow(x, g - 1.0), sys.A * sys.A / (x * x));
}
inline double derivative_scale(const StandingSystem& sys, double x)
{
    const double g = sys.params.gamma();
    const double lead = sys.params.isothermal() ? 2.0 : 2.0 * g * std::pow(x, 2.0 * (g - 1.0));
    return std::max(lead, 1.5 * sys.C1 * sys.C1 / (x * x * x * x));
}

/// Magnitude scale of the restoring value itself.
inline double value_scale(const LinearWaveSystem& sys, double x)
{
    return std::max({std::pow(x, sys.params.gamma()), std::abs(sys.flux_constant()), sys.A * sys.A / x});
}
inline double value_scale(const StandingSystem& sys, double x)
{
    const double v2 = x * x;
    return x * std::max({0.5 * sys.C1 * sys.C1 / (v2 * v2), std::abs(enthalpy(v2, sys.params.gamma())),
                         std::abs(sys.C2)});
}

/// True when the singular term (A^2/P resp. C1^2/V^4) is present.
inline bool has_singular_term(const LinearWaveSystem& sys) { return sys.A != 0.0; }
inline bool has_singular_term(const StandingSystem& sys) { return sys.C1 != 0.0; }

}  // namespace qhd
