#pragma once

// Structural points of the restoring functions f and g (second root, zero of
// the derivative, turning point of the zero-energy loop), linearisation at
// rest points, and the existence / oscillation criteria built on them.

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "qhd/errors.hpp"
#include "qhd/model.hpp"
#include "qhd/rankine_hugoniot.hpp"
#include "qhd/roots.hpp"
#include "qhd/vec2.hpp"
#include "qhd/wave_functions.hpp"

namespace qhd {

inline constexpr int kMaxBracketHalvings = 200;
inline constexpr double kNonhyperbolicTol = 1e-9;

/// Where the second positive root of the restoring function lies relative to
/// the reference (loop base) root.
enum class RootLayout { OtherRootBelow, OtherRootAbove, DoubleRoot, SingleRoot };

inline const char* to_string(RootLayout l)
{
    switch (l) {
    case RootLayout::OtherRootBelow: return "OtherRootBelow";
    case RootLayout::OtherRootAbove: return "OtherRootAbove";
    case RootLayout::DoubleRoot: return "DoubleRoot";
    case RootLayout::SingleRoot: return "SingleRoot";
    }
    return "?";
}

struct StructuralPoints {
    double reference_root;                  ///< loop base: saddle of the profile flow
    std::optional<double> second_root;      ///< P2 / V2 (equals the inner end state for shocks)
    std::optional<double> derivative_zero;  ///< P0 / V0
    std::optional<double> turning_point;    ///< P* / V*, zero of potential difference on w = 0
    RootLayout layout;
};

namespace detail {

// Move from `start` by repeated halving (factor 0.5) or doubling (factor 2)
// until pred(x) holds; returns {x, previous x}.
template <class Pred>
std::optional<std::pair<double, double>> bracket_by_scaling(double start, double factor, Pred&& pred)
{
    double prev = start;
    for (int i = 0; i < kMaxBracketHalvings; ++i) {
        const double x = prev * factor;
        if (pred(x))
            return std::make_pair(x, prev);
        prev = x;
    }
    return std::nullopt;
}

// Bracketed refinement with tol relative to the root also below 1; all
// brackets here lie in x > 0.
template <class Fn>
double refine(Fn&& fn, double lo, double hi, double tol)
{
    return bracketed_root(fn, lo, hi, tol * std::min(1.0, std::min(lo, hi)));
}

}  // namespace detail

/// Zero of potential(x) - potential(reference) reached by scaling `start`
/// toward 0 (factor < 1) or infinity (factor > 1). `start` must lie where the
/// difference is positive. Returns nullopt when no sign flip occurs within
/// the halving cap.
template <class System>
std::optional<double> zero_level_crossing(const System& sys, double start, double factor,
                                          double tol = kDefaultRootTol)
{
    const double ref_pot = potential(sys, sys.saddle_state());
    auto diff = [&](double x) { return potential(sys, x) - ref_pot; };
    if (!(diff(start) > 0.0))
        return std::nullopt;
    const auto br = detail::bracket_by_scaling(start, factor, [&](double x) {
        const double v = diff(x);
        if (std::isnan(v))
            throw BracketError("zero_level_crossing: NaN potential");
        return v <= 0.0;
    });
    if (!br)
        return std::nullopt;
    const double v = diff(br->first);
    if (!std::isfinite(v)) {
        // Diverged to -inf at the far end; walk back until finite.
        double lo = br->first, hi = br->second;
        for (int i = 0; i < 100 && !std::isfinite(diff(lo)); ++i)
            lo = 0.5 * (lo + hi);
        if (!std::isfinite(diff(lo)) || diff(lo) > 0.0)
            throw BracketError("zero_level_crossing: cannot resolve crossing near divergence");
        return detail::refine(diff, lo, br->second, tol);
    }
    return detail::refine(diff, br->first, br->second, tol);
}

template <class System>
StructuralPoints structural_points(const System& sys, double tol = kDefaultRootTol,
                                   double nonhyperbolic_tol = kNonhyperbolicTol)
{
    const double ref = sys.saddle_state();
    const Jet at_ref = restoring_jet(sys, ref);
    auto value = [&](double x) { return restoring_jet(sys, x).value; };
    auto deriv = [&](double x) { return restoring_jet(sys, x).d1; };

    StructuralPoints out{ref, std::nullopt, std::nullopt, std::nullopt, RootLayout::SingleRoot};

    if (!has_singular_term(sys)) {
        // Only one positive root; the derivative may still vanish below it.
        if (const auto br = detail::bracket_by_scaling(ref, 0.5, [&](double x) { return deriv(x) < 0.0; }))
            if (deriv(ref) > 0.0)
                out.derivative_zero = detail::refine(deriv, br->first, ref, tol);
        return out;
    }

    if (!sys.standing()) {
        // Distinct end states: both roots are known.
        const double inner = sys.inner_state();
        out.layout = RootLayout::OtherRootBelow;
        out.second_root = inner;
        out.derivative_zero = detail::refine(deriv, inner, ref, tol);
        out.turning_point = zero_level_crossing(sys, inner, 0.5, tol);
        if (!out.turning_point)
            throw BracketError("structural_points: no turning point below the inner root");
        return out;
    }

    if (std::abs(at_ref.d1) <= nonhyperbolic_tol * derivative_scale(sys, ref)) {
        out.layout = RootLayout::DoubleRoot;
        out.derivative_zero = ref;
        return out;
    }

    if (at_ref.d1 > 0.0) {
        out.layout = RootLayout::OtherRootBelow;
        const auto b0 = detail::bracket_by_scaling(ref, 0.5, [&](double x) { return deriv(x) < 0.0; });
        if (!b0)
            throw BracketError("structural_points: derivative does not change sign below reference");
        const double x0 = detail::refine(deriv, b0->first, ref, tol);
        const auto b2 = detail::bracket_by_scaling(x0, 0.5, [&](double x) { return value(x) > 0.0; });
        if (!b2)
            throw BracketError("structural_points: no second root below reference");
        out.derivative_zero = x0;
        out.second_root = detail::refine(value, b2->first, x0, tol);
        out.turning_point = zero_level_crossing(sys, *out.second_root, 0.5, tol);
        return out;
    }

    out.layout = RootLayout::OtherRootAbove;
    const auto b0 = detail::bracket_by_scaling(ref, 2.0, [&](double x) { return deriv(x) > 0.0; });
    if (!b0)
        throw BracketError("structural_points: derivative does not change sign above reference");
    const double x0 = detail::refine(deriv, ref, b0->first, tol);
    const auto b2 = detail::bracket_by_scaling(x0, 2.0, [&](double x) { return value(x) > 0.0; });
    if (!b2)
        throw BracketError("structural_points: no second root above reference");
    out.derivative_zero = x0;
    out.second_root = detail::refine(value, x0, b2->first, tol);
    return out;
}

inline StructuralPoints structural_points_linear(const LinearWaveSystem& sys, double tol = kDefaultRootTol)
{
    return structural_points(sys, tol);
}

inline StructuralPoints structural_points_standing(const StandingSystem& sys, double tol = kDefaultRootTol)
{
    return structural_points(sys, tol);
}

// ---------------------------------------------------------------------------
// Linearisation

enum class EquilibriumKind {
    Saddle,
    StableNode,
    StableFocus,
    UnstableNode,
    UnstableFocus,
    Nonhyperbolic,
    EnergyLocalMax,
};

inline const char* to_string(EquilibriumKind k)
{
    switch (k) {
    case EquilibriumKind::Saddle: return "Saddle";
    case EquilibriumKind::StableNode: return "StableNode";
    case EquilibriumKind::StableFocus: return "StableFocus";
    case EquilibriumKind::UnstableNode: return "UnstableNode";
    case EquilibriumKind::UnstableFocus: return "UnstableFocus";
    case EquilibriumKind::Nonhyperbolic: return "Nonhyperbolic";
    case EquilibriumKind::EnergyLocalMax: return "EnergyLocalMax";
    }
    return "?";
}

/// Linearisation of (x' = w, w' = a (x - x_eq) + b w) at a rest point.
///
/// Eigenvalues are ordered with the "+" square root first. Real eigenvectors
/// are -(1/lambda, 1), i.e. normalised to second component -1.
struct EquilibriumReport {
    Vec2 location;
    std::array<std::complex<double>, 2> eigenvalues;
    std::optional<std::array<Vec2, 2>> eigenvectors;
    EquilibriumKind kind;
    bool energy_local_max;               ///< Hessian of the energy negative definite
    std::array<double, 2> hessian_diag;  ///< energy Hessian at the rest point (off-diagonal is 0)
    double restoring_derivative;         ///< f'(x) or g'(x)
    double discriminant;                 ///< b^2 + 4a
};

namespace detail {

inline double viscous_coefficient(const LinearWaveSystem& sys, bool include_viscosity)
{
    if (!include_viscosity)
        return 0.0;
    const double k = sys.params.k();
    return -2.0 * sys.s * sys.params.mu() / (k * k);
}
inline double viscous_coefficient(const StandingSystem&, bool) { return 0.0; }

inline std::array<double, 2> energy_hessian(const LinearWaveSystem& sys, double x, double d1)
{
    const double k = sys.params.k();
    return {2.0 / (k * k) * d1 / (x * x), -1.0 / (x * x)};
}
inline std::array<double, 2> energy_hessian(const StandingSystem& sys, double, double d1)
{
    const double k = sys.params.k();
    return {d1 / (k * k), -1.0};
}

}  // namespace detail

template <class System>
EquilibriumReport equilibrium_analysis(const System& sys, double at, bool include_viscosity,
                                       double nonhyperbolic_tol = kNonhyperbolicTol)
{
    if (!(at > 0.0))
        throw DomainError("equilibrium_analysis: location must be > 0");
    const Jet j = restoring_jet(sys, at);
    if (std::abs(j.value) > 1e-8 * value_scale(sys, at))
        throw NotEquilibrium("equilibrium_analysis: restoring function is " + std::to_string(j.value) +
                             " at x = " + std::to_string(at));

    const double a = linear_coefficient(sys, j.d1);
    const double b = detail::viscous_coefficient(sys, include_viscosity);
    const double disc = b * b + 4.0 * a;

    EquilibriumReport rep{};
    rep.location = {at, 0.0};
    rep.restoring_derivative = j.d1;
    rep.discriminant = disc;
    rep.hessian_diag = detail::energy_hessian(sys, at, j.d1);
    rep.energy_local_max = j.d1 < 0.0;

    const bool degenerate = std::abs(j.d1) <= nonhyperbolic_tol * derivative_scale(sys, at);

    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        const double l1 = 0.5 * (b + r);
        const double l2 = 0.5 * (b - r);
        rep.eigenvalues = {std::complex<double>(l1, 0.0), std::complex<double>(l2, 0.0)};
        if (l1 != 0.0 && l2 != 0.0)
            rep.eigenvectors = std::array<Vec2, 2>{Vec2{-1.0 / l1, -1.0}, Vec2{-1.0 / l2, -1.0}};
        if (degenerate)
            rep.kind = EquilibriumKind::Nonhyperbolic;
        else if (l1 > 0.0 && l2 < 0.0)
            rep.kind = EquilibriumKind::Saddle;
        else if (l1 < 0.0)
            rep.kind = EquilibriumKind::StableNode;
        else
            rep.kind = EquilibriumKind::UnstableNode;
    } else {
        const double im = 0.5 * std::sqrt(-disc);
        rep.eigenvalues = {std::complex<double>(0.5 * b, im), std::complex<double>(0.5 * b, -im)};
        if (degenerate)
            rep.kind = EquilibriumKind::Nonhyperbolic;
        else if (b < 0.0)
            rep.kind = EquilibriumKind::StableFocus;
        else if (b > 0.0)
            rep.kind = EquilibriumKind::UnstableFocus;
        else
            rep.kind = EquilibriumKind::EnergyLocalMax;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Criteria

struct OscillationCriterion {
    double lhs;  ///< |s| mu / k
    double rhs;  ///< sqrt(-2 f'(attracting state))
    bool holds;
};

/// |s| mu / k < sqrt(-2 f'(P_in)) at the attracting (smaller) end state; this is
/// exactly the condition for a focus there.
inline OscillationCriterion oscillation_test(const LinearWaveSystem& sys)
{
    const double fp = f_family(sys, sys.inner_state()).d1;
    const double lhs = std::abs(sys.s) * sys.params.mu() / sys.params.k();
    const double rhs = std::sqrt(std::max(0.0, -2.0 * fp));
    return {lhs, rhs, lhs < rhs};
}

inline bool oscillation_criterion(const LinearWaveSystem& sys) { return oscillation_test(sys).holds; }

enum class Viscosity { Linear, Nonlinear };

inline const char* to_string(Viscosity v) { return v == Viscosity::Linear ? "linear" : "nonlinear"; }

enum class StandingVerdict { Exists, NoneZeroVelocity, NoneSonic, NoneSupersonic };

inline const char* to_string(StandingVerdict v)
{
    switch (v) {
    case StandingVerdict::Exists: return "Exists";
    case StandingVerdict::NoneZeroVelocity: return "NoneZeroVelocity";
    case StandingVerdict::NoneSonic: return "NoneSonic";
    case StandingVerdict::NoneSupersonic: return "NoneSupersonic";
    }
    return "?";
}

/// A homoclinic loop to the far-field state exists iff 0 < |u+| < c_s(rho+);
/// the same predicate holds for both viscosity models.
inline StandingVerdict standing_existence_verdict(double rho_plus, double u_plus, const ModelParams& params,
                                                  Viscosity = Viscosity::Nonlinear,
                                                  double tol_sonic = kDefaultSonicTol)
{
    detail::require_positive(rho_plus, "standing_existence_verdict");
    if (u_plus == 0.0)
        return StandingVerdict::NoneZeroVelocity;
    switch (sonic_character(u_plus, rho_plus, params.gamma(), tol_sonic)) {
    case Sonic::Subsonic: return StandingVerdict::Exists;
    case Sonic::Sonic: return StandingVerdict::NoneSonic;
    case Sonic::Supersonic: return StandingVerdict::NoneSupersonic;
    }
    return StandingVerdict::NoneSupersonic;
}

/// Evidence that no zero-speed connection joins two distinct end states: the
/// smaller root is a strict local maximum of the conserved energy.
struct ZeroSpeedReport {
    bool in_scope;            ///< false for equal end states
    EndState flagged_end;     ///< end state that is an energy local maximum
    double flagged_state;     ///< its density (P or rho = V^2)
    double flagged_derivative;  ///< f' or g' there; negative
    double other_derivative;    ///< f' or g' at the other end state; positive
    std::array<double, 2> hessian_diag;
    bool sign_pattern_ok;
    std::string note;
};

inline ZeroSpeedReport heteroclinic_nonexistence_s0(double p_plus, double p_minus, const ModelParams& params,
                                                    Viscosity viscosity)
{
    detail::require_positive(p_plus, "heteroclinic_nonexistence_s0");
    detail::require_positive(p_minus, "heteroclinic_nonexistence_s0");
    ZeroSpeedReport rep{};
    if (p_plus == p_minus) {
        rep.in_scope = false;
        rep.note = "equal end states: see the standing-wave verdict";
        return rep;
    }
    rep.in_scope = true;
    rep.flagged_end = p_plus < p_minus ? EndState::Plus : EndState::Minus;
    rep.flagged_state = std::min(p_plus, p_minus);
    const double other = std::max(p_plus, p_minus);

    if (viscosity == Viscosity::Linear) {
        const ShockData sh = momentum_branches(p_plus, p_minus, 0.0, params.gamma()).branch(1, p_plus, p_minus, 0.0);
        const LinearWaveSystem sys = build_linear_system(sh, params);
        rep.flagged_derivative = f_family(sys, rep.flagged_state).d1;
        rep.other_derivative = f_family(sys, other).d1;
        rep.hessian_diag = detail::energy_hessian(sys, rep.flagged_state, rep.flagged_derivative);
    } else {
        const StandingSystem sys = standing_system_from_end_states(p_plus, p_minus, params);
        const double vf = std::sqrt(rep.flagged_state);
        rep.flagged_derivative = g_family(sys, vf).d1;
        rep.other_derivative = g_family(sys, std::sqrt(other)).d1;
        rep.hessian_diag = detail::energy_hessian(sys, vf, rep.flagged_derivative);
    }
    rep.sign_pattern_ok = rep.flagged_derivative < 0.0 && rep.other_derivative > 0.0 &&
                          rep.hessian_diag[0] < 0.0 && rep.hessian_diag[1] < 0.0;
    rep.note = rep.flagged_end == EndState::Plus
                   ? "[P+,0] is a strict energy maximum: no orbit reaches it as y -> +inf"
                   : "[P-,0] is a strict energy maximum: no orbit leaves it as y -> -inf";
    return rep;
}

}  // namespace qhd
