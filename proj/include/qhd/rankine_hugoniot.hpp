#pragma once

// Jump relations of the isentropic Euler system, the two momentum branches
// they admit for given densities and speed, and Lax admissibility.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "qhd/errors.hpp"
#include "qhd/model.hpp"

namespace qhd {

inline constexpr double kDefaultSonicTol = 1e-9;

struct MomentumBranches {
    double d;
    double j_plus_1;
    double j_minus_1;
    double j_plus_2;
    double j_minus_2;

    ShockData branch(int i, double p_plus, double p_minus, double s) const
    {
        if (i == 1)
            return {p_plus, p_minus, j_plus_1, j_minus_1, s};
        if (i == 2)
            return {p_plus, p_minus, j_plus_2, j_minus_2, s};
        throw DomainError("MomentumBranches::branch: index must be 1 or 2");
    }
};

enum class LaxType { Lax1, Lax2, NotAdmissible };
enum class Sonic { Subsonic, Supersonic, Sonic };

struct ShockClassification {
    LaxType lax_type;
    Sonic sonic_plus;
    Sonic sonic_minus;
};

inline const char* to_string(LaxType t)
{
    switch (t) {
    case LaxType::Lax1: return "Lax1";
    case LaxType::Lax2: return "Lax2";
    case LaxType::NotAdmissible: return "NotAdmissible";
    }
    return "?";
}

inline const char* to_string(Sonic s)
{
    switch (s) {
    case Sonic::Subsonic: return "Subsonic";
    case Sonic::Supersonic: return "Supersonic";
    case Sonic::Sonic: return "Sonic";
    }
    return "?";
}

/// (J+ - J- - s(P+ - P-), [J^2/P + P^gamma] - s[J]).
inline std::pair<double, double> rh_residual(const ShockData& sh, double gamma)
{
    detail::require_positive(sh.p_plus, "rh_residual");
    detail::require_positive(sh.p_minus, "rh_residual");
    const double mass = (sh.j_plus - sh.j_minus) - sh.s * (sh.p_plus - sh.p_minus);
    const double flux_plus = sh.j_plus * sh.j_plus / sh.p_plus + std::pow(sh.p_plus, gamma);
    const double flux_minus = sh.j_minus * sh.j_minus / sh.p_minus + std::pow(sh.p_minus, gamma);
    const double momentum = (flux_plus - flux_minus) - sh.s * (sh.j_plus - sh.j_minus);
    return {mass, momentum};
}

/// Relative RH check, scaled by the size of the terms entering each residual.
inline bool rh_consistent(const ShockData& sh, double gamma, double rel_tol = 1e-10)
{
    const auto [r1, r2] = rh_residual(sh, gamma);
    const double scale1 = std::max({1.0, std::abs(sh.j_plus), std::abs(sh.j_minus),
                                    std::abs(sh.s) * std::max(sh.p_plus, sh.p_minus)});
    const double scale2 = std::max({1.0, sh.j_plus * sh.j_plus / sh.p_plus,
                                    sh.j_minus * sh.j_minus / sh.p_minus,
                                    std::pow(std::max(sh.p_plus, sh.p_minus), gamma),
                                    std::abs(sh.s) * std::max(std::abs(sh.j_plus), std::abs(sh.j_minus))});
    return std::abs(r1) <= rel_tol * scale1 && std::abs(r2) <= rel_tol * scale2;
}

/// Roots J = sP +/- d of the RH quadratic, with
/// d = sqrt(P+ P-) sqrt(((P+)^g - (P-)^g) / (P+ - P-)).
inline MomentumBranches momentum_branches(double p_plus, double p_minus, double s, double gamma)
{
    detail::require_positive(p_plus, "momentum_branches");
    detail::require_positive(p_minus, "momentum_branches");
    if (p_plus == p_minus)
        throw DegenerateInput("degenerate: equal end states (RH forces J+ = J-)");
    const double q = power_difference_quotient(p_plus, p_minus, gamma);
    const double d = std::sqrt(p_plus * p_minus) * std::sqrt(q);
    return {d, s * p_plus + d, s * p_minus + d, s * p_plus - d, s * p_minus - d};
}

inline Sonic sonic_character(double u, double rho, double gamma, double tol_sonic = kDefaultSonicTol)
{
    const double c = sound_speed(rho, gamma);
    const double au = std::abs(u);
    if (std::abs(au - c) <= tol_sonic * c)
        return Sonic::Sonic;
    return au > c ? Sonic::Supersonic : Sonic::Subsonic;
}

/// Lax k-shock iff lambda_k(w+) < s < lambda_k(w-), with lambda_{1,2} = u -/+ c_s.
/// Comparisons are strict; equality is not admissible.
inline ShockClassification lax_classify(const ShockData& sh, double gamma,
                                        double tol_sonic = kDefaultSonicTol)
{
    const double up = sh.u_plus();
    const double um = sh.u_minus();
    const double cp = sound_speed(sh.p_plus, gamma);
    const double cm = sound_speed(sh.p_minus, gamma);

    LaxType type = LaxType::NotAdmissible;
    if (up - cp < sh.s && sh.s < um - cm)
        type = LaxType::Lax1;
    else if (up + cp < sh.s && sh.s < um + cm)
        type = LaxType::Lax2;

    return {type, sonic_character(up, sh.p_plus, gamma, tol_sonic),
            sonic_character(um, sh.p_minus, gamma, tol_sonic)};
}

inline ShockClassification lax_classify(const ShockData& sh, const ModelParams& params,
                                        double tol_sonic = kDefaultSonicTol)
{
    return lax_classify(sh, params.gamma(), tol_sonic);
}

struct BranchChoice {
    ShockData shock;
    int branch;
    LaxType lax_type;
};

inline BranchChoice choose_admissible_branch(double p_plus, double p_minus, double s, double gamma)
{
    const MomentumBranches mb = momentum_branches(p_plus, p_minus, s, gamma);
    std::optional<BranchChoice> found;
    for (int i : {1, 2}) {
        const ShockData sh = mb.branch(i, p_plus, p_minus, s);
        const LaxType t = lax_classify(sh, gamma).lax_type;
        if (t == LaxType::NotAdmissible)
            continue;
        if (found)
            throw NoAdmissibleBranch("both momentum branches pass the Lax test");
        found = BranchChoice{sh, i, t};
    }
    if (!found)
        throw NoAdmissibleBranch("no momentum branch passes the Lax test");
    return *found;
}

/// The Lax-admissible shock through (P+, P-, s): branch 2 (Lax 2) when P+ < P-,
/// branch 1 (Lax 1) when P- < P+.
inline ShockData admissible_branch(double p_plus, double p_minus, double s, double gamma)
{
    return choose_admissible_branch(p_plus, p_minus, s, gamma).shock;
}

/// Left-hand sides r^(g+1) - (g+1) r + g and g r^(g+1) - (g+1) r^g + 1 of
/// the Lax 2 inequalities in the density ratio r = P-/P+ > 1.
inline std::pair<double, double> lax_inequality_check(double r, double gamma)
{
    if (!(r > 1.0))
        throw DomainError("lax_inequality_check: r must be > 1, got " + std::to_string(r));
    const double l = std::log1p(r - 1.0);
    const double g1 = gamma + 1.0;
    const double f_tilde = std::expm1(g1 * l) - g1 * (r - 1.0);
    const double f_bar = gamma * std::expm1(g1 * l) - g1 * std::expm1(gamma * l);
    return {f_tilde, f_bar};
}

/// Spatial mirror x -> -x of a shock: end states swap, momenta and speed flip sign.
inline ShockData reflect(const ShockData& sh)
{
    return {sh.p_minus, sh.p_plus, -sh.j_minus, -sh.j_plus, -sh.s};
}

}  // namespace qhd
