#pragma once

// Orbit construction in the profile phase plane: closed-form homoclinic loops,
// integrated standing waves (homoclinic orbits) and shooting for travelling
// waves (heteroclinic orbits), plus the audits run over the results.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qhd/errors.hpp"
#include "qhd/integrator.hpp"
#include "qhd/model.hpp"
#include "qhd/rankine_hugoniot.hpp"
#include "qhd/structure.hpp"
#include "qhd/wave_functions.hpp"

namespace qhd {

// ---------------------------------------------------------------------------
// Vector fields. They return NaN outside the positive half-plane so the
// integrator rejects the step instead of throwing.

namespace detail {
inline Vec2 nan_vec() { return {std::nan(""), std::nan("")}; }
}  // namespace detail

/// P' = Q, Q' = (2/k^2) f(P) - (2 s mu / k^2) Q + Q^2 / P.
struct FullField {
    LinearWaveSystem sys;
    Vec2 operator()(double, const Vec2& s) const
    {
        if (!(s.x > 0.0))
            return detail::nan_vec();
        const double k2 = sys.params.k() * sys.params.k();
        const double f = f_family(sys, s.x).value;
        return {s.w, 2.0 / k2 * f - 2.0 * sys.s * sys.params.mu() / k2 * s.w + s.w * s.w / s.x};
    }
};

/// The full field without the viscous term; conserves H.
struct ReducedField {
    LinearWaveSystem sys;
    Vec2 operator()(double, const Vec2& s) const
    {
        if (!(s.x > 0.0))
            return detail::nan_vec();
        const double k2 = sys.params.k() * sys.params.k();
        return {s.w, 2.0 / k2 * f_family(sys, s.x).value + s.w * s.w / s.x};
    }
};

/// V' = W, W' = g(V) / k^2; conserves H1.
struct ConservativeField {
    StandingSystem sys;
    Vec2 operator()(double, const Vec2& s) const
    {
        if (!(s.x > 0.0))
            return detail::nan_vec();
        const double k2 = sys.params.k() * sys.params.k();
        return {s.w, g_family(sys, s.x).value / k2};
    }
};

inline ReducedField conservative_field(const LinearWaveSystem& sys) { return {sys}; }
inline ConservativeField conservative_field(const StandingSystem& sys) { return {sys}; }

/// The linear system seen under x -> -x: end states swap, A and s flip sign.
inline LinearWaveSystem reflect(const LinearWaveSystem& sys)
{
    return {-sys.A, sys.B, -sys.s, sys.params, sys.p_plus, sys.p_minus};
}

// ---------------------------------------------------------------------------
// Closed-form homoclinic loop

/// Points of the zero level set of the inviscid energy, ordered along the
/// loop: from the saddle along the lower branch to the turning point and back
/// along the upper branch.
struct PhaseCurve {
    std::vector<Vec2> points;
    double turning_point;
    double reference_root;
    double max_abs_energy;  ///< max |H| (resp. |H1|) over the points
};

template <class System>
PhaseCurve homoclinic_loop(const System& sys, std::size_t n = 2001)
{
    if (n < 3)
        throw DomainError("homoclinic_loop: need at least 3 points per branch");
    const StructuralPoints sp = structural_points(sys);
    if (!sp.turning_point)
        throw NoSuchOrbit(std::string("homoclinic_loop: no turning point (layout ") + to_string(sp.layout) +
                          "); the zero level set has no loop");
    const double lo = *sp.turning_point, hi = sp.reference_root;

    // Cosine spacing clusters points at both ends of [lo, hi].
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
        grid[i] = lo + (hi - lo) * t;
    }
    grid.front() = lo;
    grid.back() = hi;

    auto w_at = [&](double x) {
        if (x == lo || x == hi)
            return 0.0;
        const double w = zero_level_branch(sys, x);
        return std::isnan(w) ? 0.0 : w;
    };

    PhaseCurve c{{}, lo, hi, 0.0};
    c.points.reserve(2 * n - 1);
    for (std::size_t i = n; i-- > 0;)
        c.points.push_back({grid[i], -w_at(grid[i])});
    for (std::size_t i = 1; i < n; ++i)
        c.points.push_back({grid[i], w_at(grid[i])});
    for (const Vec2& p : c.points)
        c.max_abs_energy = std::max(c.max_abs_energy, std::abs(loop_energy(sys, p.x, p.w)));
    return c;
}

/// Branches W = -g1(V) on (0, V+) and W = g1(V) on (V+, x_max) of the zero
/// level set through the saddle, g1 = sqrt(2 (G - G(V+))). Points where the
/// level set is empty are omitted.
template <class System>
std::pair<std::vector<Vec2>, std::vector<Vec2>> separatrix_branches(const System& sys, double x_max,
                                                                     std::size_t n = 1001)
{
    const double ref = sys.saddle_state();
    std::vector<Vec2> lower, upper;
    for (std::size_t i = 1; i < n; ++i) {
        const double x = ref * static_cast<double>(i) / static_cast<double>(n);
        const double w = zero_level_branch(sys, x);
        if (!std::isnan(w))
            lower.push_back({x, -w});
    }
    lower.push_back({ref, 0.0});
    upper.push_back({ref, 0.0});
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = ref + (x_max - ref) * static_cast<double>(i) / static_cast<double>(n);
        const double w = zero_level_branch(sys, x);
        if (!std::isnan(w))
            upper.push_back({x, w});
    }
    return {lower, upper};
}

/// Both branches +/- sqrt(2 (G - G(V+))) of the zero level set for
/// V in [V+, x_max]; at a sonic state these are the whole set apart from V+.
template <class System>
std::pair<std::vector<Vec2>, std::vector<Vec2>> unbounded_level_branches(const System& sys, double x_max,
                                                                          std::size_t n = 1001)
{
    const double ref = sys.saddle_state();
    std::vector<Vec2> up, down;
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = ref + (x_max - ref) * static_cast<double>(i) / static_cast<double>(n);
        const double w = i == 0 ? 0.0 : zero_level_branch(sys, x);
        if (std::isnan(w))
            continue;
        up.push_back({x, w});
        down.push_back({x, -w});
    }
    return {up, down};
}

// ---------------------------------------------------------------------------
// Profile results

enum class Verdict { Converged, NotConverged };

inline const char* to_string(Verdict v) { return v == Verdict::Converged ? "Converged" : "NotConverged"; }

struct ProfileDiagnostics {
    double terminal_residual = std::numeric_limits<double>::quiet_NaN();
    double convergence_radius = std::numeric_limits<double>::quiet_NaN();
    double energy_monotonicity_violation = 0.0;  ///< max decrease of H between samples (drift of H1 for standing)
    double min_energy = 0.0;
    double min_state = 0.0;
    double max_state = 0.0;
    long oscillation_count = 0;
    Verdict verdict = Verdict::NotConverged;
};

struct ProfileSolution {
    Trajectory trajectory;
    std::vector<std::pair<double, double>> primary_profile;    ///< (y, P) or (y, rho)
    std::vector<std::pair<double, double>> secondary_profile;  ///< (y, J) or (y, U)
    ProfileDiagnostics diagnostics;
};

// ---------------------------------------------------------------------------
// Standing waves

namespace detail {

inline double u_plus_of(const LinearWaveSystem& sys) { return -sys.A / sys.p_plus; }
inline double u_plus_of(const StandingSystem& sys) { return -sys.C1 / (sys.v_plus * sys.v_plus); }
inline double rho_plus_of(const LinearWaveSystem& sys) { return sys.p_plus; }
inline double rho_plus_of(const StandingSystem& sys) { return sys.v_plus * sys.v_plus; }

// Second and third derivatives of the potential at a root of the restoring function.
inline std::pair<double, double> potential_taylor(const LinearWaveSystem& sys, double x)
{
    const Jet j = f_family(sys, x);
    const double c = 2.0 / (sys.params.k() * sys.params.k());
    return {c * j.d1 / (x * x), c * (j.d2 / (x * x) - 4.0 * j.d1 / (x * x * x))};
}
inline std::pair<double, double> potential_taylor(const StandingSystem& sys, double x)
{
    const Jet j = g_family(sys, x);
    const double c = 1.0 / (sys.params.k() * sys.params.k());
    return {c * j.d1, c * j.d2};
}

inline double branch_from_difference(const LinearWaveSystem&, double x, double diff)
{
    return x * std::sqrt(2.0 * diff);
}
inline double branch_from_difference(const StandingSystem&, double, double diff) { return std::sqrt(2.0 * diff); }

inline std::pair<double, double> secondary_value(const LinearWaveSystem& sys, double x)
{
    return {x, momentum_profile(sys, x)};
}
inline std::pair<double, double> secondary_value(const StandingSystem& sys, double x)
{
    return {x * x, velocity_profile(sys, x)};
}

}  // namespace detail

/// Signed speed x' on the zero level set while approaching the saddle from
/// the turning-point side. Near the saddle the potential difference is
/// replaced by its cubic Taylor polynomial to avoid cancellation.
template <class System>
double level_set_speed(const System& sys, double x)
{
    if (!(x > 0.0))
        return std::nan("");
    const double ref = sys.saddle_state();
    const double dx = x - ref;
    double diff;
    if (std::abs(dx) < 1e-4 * ref) {
        const auto [p2, p3] = detail::potential_taylor(sys, ref);
        diff = 0.5 * p2 * dx * dx + p3 * dx * dx * dx / 6.0;
    } else {
        diff = potential(sys, x) - potential(sys, ref);
    }
    if (diff <= 0.0)
        return 0.0;
    const double w = detail::branch_from_difference(sys, x, diff);
    return dx < 0.0 ? w : -w;
}

/// Rate of approach to the saddle along the loop, sqrt of the linear coefficient.
template <class System>
double saddle_rate(const System& sys)
{
    const double a = linear_coefficient(sys, restoring_jet(sys, sys.saddle_state()).d1);
    return a > 0.0 ? std::sqrt(a) : 0.0;
}

struct StandingOptions {
    double y_half_span = 0.0;  ///< <= 0 selects phase-1 length + 30 / rate
    double rtol = 1e-10;
    double atol = 1e-12;
    double handoff = 1e-3;         ///< relative distance to the saddle where phase 2 takes over
    double converged_tol = 1e-6;   ///< terminal residual / max(1, saddle)
};

/// Outcome of shooting from a candidate turning point toward the saddle.
struct StandingConstruction {
    bool reached_saddle = false;
    std::optional<double> start;  ///< candidate turning point
    std::string reason;
    Trajectory half;              ///< conservative flow from the start until the hand-off
};

/// Independent construction check: locate a zero of the potential difference
/// on w = 0 on either side of the saddle and integrate the inviscid flow from
/// there. Success means the orbit arrives at the saddle without turning back.
template <class System>
StandingConstruction construct_standing_orbit(const System& sys, const StandingOptions& opt = {})
{
    StandingConstruction out;
    StructuralPoints sp;
    try {
        sp = structural_points(sys);
    } catch (const BracketError& e) {
        out.reason = std::string("structural analysis failed: ") + e.what();
        return out;
    }
    const double ref = sp.reference_root;
    if (sp.layout == RootLayout::SingleRoot || sp.layout == RootLayout::DoubleRoot) {
        out.reason = std::string("no second root apart from the saddle (") + to_string(sp.layout) + ")";
        return out;
    }
    if (sp.layout == RootLayout::OtherRootBelow) {
        out.start = sp.turning_point;
    } else {
        try {
            // Above the second root the potential difference turns positive again.
            const double ref_pot = potential(sys, ref);
            auto diff = [&](double x) { return potential(sys, x) - ref_pot; };
            if (const auto br = detail::bracket_by_scaling(*sp.second_root, 2.0,
                                                           [&](double x) { return diff(x) > 0.0; }))
                out.start = detail::refine(diff, br->second, br->first, kDefaultRootTol);
        } catch (const BracketError& e) {
            out.reason = std::string("turning point search failed: ") + e.what();
            return out;
        }
    }
    if (!out.start) {
        out.reason = "the zero level set does not meet w = 0 away from the saddle";
        return out;
    }
    const double x0 = *out.start;
    const double well = std::abs(restoring_jet(sys, x0).value);
    if (!(well > 1e3 * std::numeric_limits<double>::epsilon() * value_scale(sys, x0))) {
        out.reason = "restoring force at the candidate start is below roundoff";
        return out;
    }

    const double span = std::abs(ref - x0);
    const double radius = std::min(opt.handoff * ref, 1e-2 * span);
    const double lo = std::min(ref, x0) - span, hi = std::max(ref, x0) + span;
    const std::vector<EventSpec> ev{
        {"near_saddle", [=](double, const Vec2& s) { return std::hypot(s.x - ref, s.w) - radius; }, true, -1},
        {"w_zero", [](double, const Vec2& s) { return s.w; }, true, 0},
        {"cross_saddle", [=](double, const Vec2& s) { return (s.x - ref) * (x0 < ref ? 1.0 : -1.0); }, true, 1},
        {"left_box", [=](double, const Vec2& s) { return std::min(s.x - lo, hi - s.x); }, true, -1},
    };
    IntegratorOptions io;
    io.rtol = opt.rtol;
    io.atol = opt.atol * std::min(1.0, std::min(x0, ref));
    const double rate = saddle_rate(sys);
    const double y_end = rate > 0.0 ? 200.0 / rate + 50.0 : 1e4;
    try {
        out.half = integrate_planar(conservative_field(sys), Vec2{x0, 0.0}, 0.0, y_end, io, ev);
    } catch (const IntegrationError& e) {
        out.reason = std::string("integration failed: ") + e.what();
        return out;
    }
    if (out.half.terminated_by && *out.half.terminated_by == 0) {
        out.reached_saddle = true;
        out.reason = "reached the saddle";
    } else if (out.half.terminated_by) {
        out.reason = "orbit deviated: " + ev[*out.half.terminated_by].name;
    } else {
        out.reason = "orbit did not approach the saddle within the span";
    }
    return out;
}

/// Homoclinic standing-wave profile, symmetric about y = 0 where x = x*.
///
/// Refuses (NoSuchOrbit) unless the existence verdict is Exists. The half
/// y >= 0 is integrated from the turning point: first the planar inviscid
/// flow, then near the saddle the scalar flow along the zero level set.
/// The half y < 0 is the exact mirror image (y, w) -> (-y, -w).
template <class System>
ProfileSolution standing_profile(const System& sys, const StandingOptions& opt = {})
{
    const double rho = detail::rho_plus_of(sys);
    const double u = detail::u_plus_of(sys);
    const StandingVerdict v = standing_existence_verdict(rho, u, sys.params);
    if (!sys.standing())
        throw DomainError("standing_profile: end states differ");
    if (v != StandingVerdict::Exists)
        throw NoSuchOrbit(std::string("standing_profile: no standing wave (") + to_string(v) + ")");

    StandingConstruction c = construct_standing_orbit(sys, opt);
    if (!c.reached_saddle)
        throw IntegrationError(IntegrationError::Kind::NonFinite,
                               "standing_profile: construction failed: " + c.reason);

    const auto field = conservative_field(sys);
    const double ref = sys.saddle_state();
    double y_full = opt.y_half_span;
    const double y_h = c.half.back().y;
    if (!(y_full > 0.0))
        y_full = y_h + 30.0 / saddle_rate(sys);

    std::vector<Sample> half;
    for (const Sample& s : c.half.samples) {
        if (s.y > y_full)
            break;
        half.push_back(s);
    }
    IntegratorStats stats = c.half.meta;
    if (y_full > y_h) {
        auto scalar = [&](double, const Vec2& s) { return Vec2{level_set_speed(sys, s.x), 0.0}; };
        IntegratorOptions io;
        io.rtol = opt.rtol;
        io.atol = opt.atol * 1e-3;
        const Trajectory t2 = integrate_planar(scalar, Vec2{c.half.back().state.x, 0.0}, y_h, y_full, io);
        stats.steps += t2.meta.steps;
        stats.rejected += t2.meta.rejected;
        stats.evaluations += t2.meta.evaluations;
        for (std::size_t i = 1; i < t2.samples.size(); ++i) {
            const double x = t2.samples[i].state.x;
            const Vec2 st{x, level_set_speed(sys, x)};
            half.push_back({t2.samples[i].y, st, field(0.0, st)});
        }
    }

    ProfileSolution sol;
    Trajectory& tr = sol.trajectory;
    tr.samples.reserve(2 * half.size());
    for (std::size_t i = half.size(); i-- > 1;) {
        const Sample& s = half[i];
        tr.samples.push_back({-s.y, {s.state.x, -s.state.w}, {-s.rate.x, s.rate.w}});
    }
    tr.samples.insert(tr.samples.end(), half.begin(), half.end());

    ProfileDiagnostics& d = sol.diagnostics;
    d.min_state = d.max_state = tr.samples.front().state.x;
    double e_min = std::numeric_limits<double>::infinity(), e_max = -e_min;
    double prev_w = 0.0;
    for (const Sample& s : tr.samples) {
        d.min_state = std::min(d.min_state, s.state.x);
        d.max_state = std::max(d.max_state, s.state.x);
        const double e = loop_energy(sys, s.state.x, s.state.w);
        e_min = std::min(e_min, e);
        e_max = std::max(e_max, e);
        if (s.state.w != 0.0) {
            if (prev_w != 0.0 && (prev_w > 0.0) != (s.state.w > 0.0))
                ++d.oscillation_count;
            prev_w = s.state.w;
        }
        const auto [p, q] = detail::secondary_value(sys, s.state.x);
        sol.primary_profile.emplace_back(s.y, p);
        sol.secondary_profile.emplace_back(s.y, q);
    }
    d.min_energy = e_min;
    d.energy_monotonicity_violation = e_max - e_min;
    tr.meta = stats;
    tr.meta.max_energy_drift = std::max(std::abs(e_min), std::abs(e_max));
    d.convergence_radius = opt.converged_tol * std::max(1.0, ref);
    const Vec2 end = tr.back().state;
    d.terminal_residual = std::hypot(end.x - ref, end.w);
    d.verdict = d.terminal_residual < d.convergence_radius ? Verdict::Converged : Verdict::NotConverged;
    return sol;
}

/// One traversal of the loop by the inviscid flow: starts on the lower branch
/// at x = saddle - offset (saddle - turning point) and stops when x returns to
/// the start on the upper branch.
template <class System>
Trajectory loop_traversal(const System& sys, double offset = 1e-2, const IntegratorOptions& io = {})
{
    const StructuralPoints sp = structural_points(sys);
    if (!sp.turning_point)
        throw NoSuchOrbit("loop_traversal: no homoclinic loop");
    const double x0 = sp.reference_root - offset * (sp.reference_root - *sp.turning_point);
    const Vec2 init{x0, -zero_level_branch(sys, x0)};
    const std::vector<EventSpec> ev{
        {"closed", [=](double, const Vec2& s) { return s.w > 0.0 ? s.x - x0 : -1.0; }, true, 1},
    };
    const double rate = saddle_rate(sys);
    Trajectory tr = integrate_planar(conservative_field(sys), init, 0.0, 400.0 / rate + 100.0, io, ev);
    if (!tr.terminated_by)
        throw IntegrationError(IntegrationError::Kind::MaxSteps, "loop_traversal: loop did not close");
    double drift = 0.0;
    const double e0 = loop_energy(sys, init.x, init.w);
    for (const Sample& s : tr.samples)
        drift = std::max(drift, std::abs(loop_energy(sys, s.state.x, s.state.w) - e0));
    tr.meta.max_energy_drift = drift;
    return tr;
}

/// Max |w_integrated - w_closed| over the loop grid points covered by the
/// trajectory's monotone pieces, resampled with the Hermite interpolant.
template <class System>
double max_loop_deviation(const System& sys, const Trajectory& tr, const PhaseCurve& loop)
{
    std::vector<double> xs;
    for (const Vec2& p : loop.points)
        if (p.w > 0.0)
            xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());

    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < tr.samples.size(); ++i) {
        const Sample& a = tr.samples[i];
        const Sample& b = tr.samples[i + 1];
        if (a.state.w == 0.0 || b.state.w == 0.0 || (a.state.w > 0.0) != (b.state.w > 0.0))
            continue;
        const double sign = a.state.w > 0.0 ? 1.0 : -1.0;
        const double xl = std::min(a.state.x, b.state.x), xr = std::max(a.state.x, b.state.x);
        auto it = std::lower_bound(xs.begin(), xs.end(), xl);
        for (; it != xs.end() && *it <= xr; ++it) {
            const double xg = *it;
            auto gx = [&](double y) { return hermite(a, b, y).x - xg; };
            double y;
            try {
                y = bracketed_root(gx, a.y, b.y, 1e-15);
            } catch (const BracketError&) {
                continue;
            }
            const double w_int = hermite(a, b, y).w;
            const double w_cf = zero_level_branch(sys, xg);
            if (std::isnan(w_cf))
                continue;
            worst = std::max(worst, std::abs(w_int - sign * w_cf));
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Travelling waves

struct HeteroclinicOptions {
    double delta = 0.0;               ///< launch offset; <= 0 selects 1e-7 P- (canonical frame)
    double rtol = 1e-10;
    double atol = 1e-12;
    double y_max = 1e4;
    double convergence_radius = 0.0;  ///< <= 0 selects 1e-9 max(1, P+) (canonical frame)
};

namespace detail {

inline Trajectory reverse_orientation(const Trajectory& in)
{
    Trajectory out;
    out.meta = in.meta;
    out.terminated_by = in.terminated_by;
    out.samples.reserve(in.samples.size());
    for (std::size_t i = in.samples.size(); i-- > 0;) {
        const Sample& s = in.samples[i];
        out.samples.push_back({0.0 - s.y, {s.state.x, -s.state.w}, {-s.rate.x, s.rate.w}});
    }
    for (std::size_t i = in.events.size(); i-- > 0;) {
        const EventHit& h = in.events[i];
        out.events.push_back({h.event, 0.0 - h.y, {h.state.x, -h.state.w}});
    }
    return out;
}

// Heteroclinic orbit for s > 0, P+ < P-: from the saddle [P-, 0] to [P+, 0].
inline ProfileSolution heteroclinic_canonical(const LinearWaveSystem& sys, const HeteroclinicOptions& opt)
{
    const double ref = sys.p_minus, target = sys.p_plus;
    const EquilibriumReport eq = equilibrium_analysis(sys, ref, true);
    if (eq.kind != EquilibriumKind::Saddle || !eq.eigenvectors)
        throw NoSuchOrbit("heteroclinic_profile: [P-, 0] is not a saddle");
    const Vec2 v1 = (*eq.eigenvectors)[0];
    const Vec2 dir = (1.0 / norm(v1)) * v1;  // (-1/l1, -1) normalised: into P < P-
    const double delta = opt.delta > 0.0 ? opt.delta : 1e-7 * ref;
    const double radius = opt.convergence_radius > 0.0 ? opt.convergence_radius : 1e-9 * std::max(1.0, target);

    const std::vector<EventSpec> ev{
        {"q_zero", [](double, const Vec2& s) { return s.w; }, false, 0},
        {"near_target", [=](double, const Vec2& s) { return std::hypot(s.x - target, s.w) - radius; }, true, -1},
    };
    IntegratorOptions io;
    io.rtol = opt.rtol;
    io.atol = opt.atol;
    const Vec2 init = Vec2{ref, 0.0} + delta * dir;

    ProfileSolution sol;
    sol.trajectory = integrate_planar(FullField{sys}, init, 0.0, opt.y_max, io, ev);
    Trajectory& tr = sol.trajectory;

    ProfileDiagnostics& d = sol.diagnostics;
    d.convergence_radius = radius;
    d.oscillation_count = static_cast<long>(tr.count(0));
    d.min_state = d.max_state = tr.samples.front().state.x;
    d.min_energy = std::numeric_limits<double>::infinity();
    double prev_h = std::numeric_limits<double>::quiet_NaN();
    for (const Sample& s : tr.samples) {
        d.min_state = std::min(d.min_state, s.state.x);
        d.max_state = std::max(d.max_state, s.state.x);
        const double h = energy_H(sys, s.state.x, s.state.w, EndState::Minus);
        d.min_energy = std::min(d.min_energy, h);
        if (!std::isnan(prev_h))
            d.energy_monotonicity_violation = std::max(d.energy_monotonicity_violation, prev_h - h);
        prev_h = h;
    }
    const Vec2 end = tr.back().state;
    d.terminal_residual = std::hypot(end.x - target, end.w);
    d.verdict = tr.terminated_by ? Verdict::Converged : Verdict::NotConverged;
    return sol;
}

}  // namespace detail

/// Travelling-wave profile connecting [P-, 0] at y = -inf to [P+, 0] at +inf.
///
/// Covers s > 0 with P+ < P- and, through the reflection x -> -x, s < 0 with
/// P- < P+. Other configurations have no connection and raise NoSuchOrbit.
/// Reaching y_max first is reported as NotConverged, not as an error.
inline ProfileSolution heteroclinic_profile(const ShockData& shock, const ModelParams& params,
                                            const HeteroclinicOptions& opt = {})
{
    const LinearWaveSystem sys = build_linear_system(shock, params);
    if (shock.p_plus == shock.p_minus)
        throw DegenerateInput("heteroclinic_profile: equal end states");
    if (shock.s == 0.0)
        throw NoSuchOrbit("heteroclinic_profile: s = 0; the smaller end state is a strict energy maximum, "
                          "no connection exists");
    const bool direct = shock.s > 0.0 && shock.p_plus < shock.p_minus;
    const bool reversed = shock.s < 0.0 && shock.p_minus < shock.p_plus;
    if (!direct && !reversed)
        throw NoSuchOrbit("heteroclinic_profile: the larger end state would have to be reached as y -> +inf "
                          "but it is a saddle and the smaller one attracts; no connection");

    ProfileSolution sol = detail::heteroclinic_canonical(direct ? sys : reflect(sys), opt);
    if (reversed)
        sol.trajectory = detail::reverse_orientation(sol.trajectory);
    for (const Sample& s : sol.trajectory.samples) {
        sol.primary_profile.emplace_back(s.y, s.state.x);
        sol.secondary_profile.emplace_back(s.y, momentum_profile(sys, s.state.x));
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Audits

struct LaSalleReport {
    double max_lyapunov_increase = 0.0;
    double negative_energy_fraction = 0.0;
    bool terminal_at_attractor = false;
    double terminal_distance_attractor = 0.0;
    double terminal_distance_saddle = 0.0;
    bool passed = false;
    std::vector<std::string> failures;
};

/// Lyapunov / LaSalle audit of a trajectory of the linear system. Trajectories
/// with s < 0 are audited in the reflected frame where the flow runs from the
/// larger to the smaller end state.
inline LaSalleReport lasalle_audit(const Trajectory& traj, const LinearWaveSystem& sys_in,
                                   double l_tol = 1e-9, double h_tol = 1e-9)
{
    const bool flip = sys_in.s < 0.0;
    const LinearWaveSystem sys = flip ? reflect(sys_in) : sys_in;
    const Trajectory tr = flip ? detail::reverse_orientation(traj) : traj;

    LaSalleReport rep;
    if (tr.samples.empty()) {
        rep.failures.push_back("empty trajectory");
        return rep;
    }
    const double attractor = sys.inner_state(), saddle = sys.saddle_state();
    std::size_t negative = 0;
    double prev_l = std::numeric_limits<double>::quiet_NaN();
    for (const Sample& s : tr.samples) {
        const double l = lyapunov_L(sys, s.state.x, s.state.w);
        if (!std::isnan(prev_l))
            rep.max_lyapunov_increase = std::max(rep.max_lyapunov_increase, l - prev_l);
        prev_l = l;
        if (energy_H(sys, s.state.x, s.state.w, EndState::Minus) < -h_tol)
            ++negative;
    }
    rep.negative_energy_fraction = static_cast<double>(negative) / static_cast<double>(tr.samples.size());
    const Vec2 end = tr.back().state;
    rep.terminal_distance_attractor = std::hypot(end.x - attractor, end.w);
    rep.terminal_distance_saddle = std::hypot(end.x - saddle, end.w);
    rep.terminal_at_attractor = rep.terminal_distance_attractor < 1e-6 * std::max(1.0, attractor) &&
                                rep.terminal_distance_attractor < rep.terminal_distance_saddle;

    if (rep.max_lyapunov_increase > l_tol)
        rep.failures.push_back("Lyapunov function increases by " + std::to_string(rep.max_lyapunov_increase));
    if (negative > 0)
        rep.failures.push_back(std::to_string(negative) + " samples with H < -" + std::to_string(h_tol) +
                               " (outside the loop region)");
    if (!rep.terminal_at_attractor)
        rep.failures.push_back("terminal point is not the attracting equilibrium (distance " +
                               std::to_string(rep.terminal_distance_attractor) + ")");
    rep.passed = rep.failures.empty();
    return rep;
}

inline LaSalleReport lasalle_audit(const ProfileSolution& profile, const LinearWaveSystem& sys)
{
    return lasalle_audit(profile.trajectory, sys);
}

struct EnergyRateCheck {
    double max_relative_error = 0.0;    ///< finite-difference dH/dy vs the exact rate, over tested intervals
    double min_finite_difference = std::numeric_limits<double>::infinity();
    std::size_t intervals_tested = 0;
    std::size_t intervals_total = 0;
};

/// Compares (H_{i+1} - H_i) / dy with the interval mean of (2 s mu / k^2)(Q/P)^2
/// (Simpson rule with a Hermite midpoint). Intervals whose energy change is
/// below the resolution of H are counted but not compared.
inline EnergyRateCheck energy_rate_check(const Trajectory& tr, const LinearWaveSystem& sys)
{
    EnergyRateCheck out;
    const double k2 = sys.params.k() * sys.params.k();
    const double c = 2.0 * sys.s * sys.params.mu() / k2;
    auto rate = [&](const Vec2& s) { return c * (s.w / s.x) * (s.w / s.x); };
    auto H = [&](const Vec2& s) { return energy_H(sys, s.x, s.w, EndState::Minus); };
    const double f_ref = std::abs(F_eval(sys, sys.p_minus));
    for (std::size_t i = 0; i + 1 < tr.samples.size(); ++i) {
        const Sample& a = tr.samples[i];
        const Sample& b = tr.samples[i + 1];
        const double dy = b.y - a.y;
        const double dh = H(b.state) - H(a.state);
        const double fd = dh / dy;
        ++out.intervals_total;
        out.min_finite_difference = std::min(out.min_finite_difference, fd);
        const double floor = 1e-9 * std::max({1.0, f_ref, std::abs(F_eval(sys, a.state.x))});
        if (std::abs(dh) < floor)
            continue;
        const Vec2 mid = hermite(a, b, 0.5 * (a.y + b.y));
        const double mean = (rate(a.state) + 4.0 * rate(mid) + rate(b.state)) / 6.0;
        if (mean == 0.0)
            continue;
        ++out.intervals_tested;
        out.max_relative_error = std::max(out.max_relative_error, std::abs(fd - mean) / std::abs(mean));
    }
    return out;
}

}  // namespace qhd
