#pragma once

// Adaptive Dormand-Prince 5(4) integration of planar autonomous or
// non-autonomous fields, with dense output and event location.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qhd/errors.hpp"
#include "qhd/roots.hpp"
#include "qhd/vec2.hpp"

namespace qhd {

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  ///< 0 selects automatically
    long max_steps = 4'000'000;
    bool require_positive_first = true;  ///< first component must stay > 0
};

/// Sign change of fn(y, state) detected between accepted steps and located on
/// the dense output. direction: +1 rising only, -1 falling only, 0 both.
struct EventSpec {
    std::string name;
    std::function<double(double, const Vec2&)> fn;
    bool terminal = false;
    int direction = 0;
};

struct EventHit {
    std::size_t event;  ///< index into the event list
    double y;
    Vec2 state;
};

struct Sample {
    double y;
    Vec2 state;
    Vec2 rate;  ///< field value, for Hermite interpolation between samples
};

struct IntegratorStats {
    long steps = 0;
    long rejected = 0;
    long evaluations = 0;
    double max_energy_drift = std::numeric_limits<double>::quiet_NaN();  ///< filled by callers that track an energy
};

struct Trajectory {
    std::vector<Sample> samples;
    std::vector<EventHit> events;
    IntegratorStats meta;
    std::optional<std::size_t> terminated_by;  ///< terminal event that stopped the run

    const Sample& back() const { return samples.back(); }
    std::size_t count(std::size_t event) const
    {
        return static_cast<std::size_t>(
            std::count_if(events.begin(), events.end(), [&](const EventHit& h) { return h.event == event; }));
    }
};

/// Cubic Hermite interpolation between two samples.
inline Vec2 hermite(const Sample& a, const Sample& b, double y)
{
    const double h = b.y - a.y;
    const double t = (y - a.y) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * a.state + (h10 * h) * a.rate + h01 * b.state + (h11 * h) * b.rate;
}

namespace detail {

// Dormand-Prince tableau.
struct DP5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    // Continuous extension (Hairer & Wanner, dopri5).
    static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                            d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                            d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
};

struct DenseStep {
    double y0, h;
    Vec2 r1, r2, r3, r4, r5;

    Vec2 operator()(double y) const
    {
        const double t = (y - y0) / h;
        const double t1 = 1.0 - t;
        return r1 + t * (r2 + t1 * (r3 + t * (r4 + t1 * r5)));
    }
};

}  // namespace detail

/// Integrates state' = field(y, state) from init over [span_begin, span_end].
///
/// Stops at span_end or at the first terminal event. Throws IntegrationError
/// on step-size underflow, loss of positivity (when required) and when the
/// step budget is exhausted. Deterministic for fixed inputs.
template <class Field>
Trajectory integrate_planar(Field&& field, Vec2 init, double span_begin, double span_end,
                            const IntegratorOptions& opt = {}, std::span<const EventSpec> events = {})
{
    using detail::DP5;
    if (!(span_end > span_begin))
        throw DomainError("integrate_planar: span must be increasing");
    if (!(opt.rtol > 0.0) || !(opt.atol > 0.0))
        throw DomainError("integrate_planar: rtol and atol must be > 0");
    if (!isfinite(init))
        throw IntegrationError(IntegrationError::Kind::NonFinite, "integrate_planar: non-finite initial state");
    if (opt.require_positive_first && !(init.x > 0.0))
        throw IntegrationError(IntegrationError::Kind::PositivityLost,
                               "integrate_planar: initial first component must be > 0");

    Trajectory tr;
    auto eval = [&](double y, const Vec2& s) {
        ++tr.meta.evaluations;
        return field(y, s);
    };
    auto err_norm = [&](const Vec2& e, const Vec2& a, const Vec2& b) {
        const double sx = opt.atol + opt.rtol * std::max(std::abs(a.x), std::abs(b.x));
        const double sw = opt.atol + opt.rtol * std::max(std::abs(a.w), std::abs(b.w));
        return std::sqrt(0.5 * ((e.x / sx) * (e.x / sx) + (e.w / sw) * (e.w / sw)));
    };

    double y = span_begin;
    Vec2 s = init;
    Vec2 k1 = eval(y, s);
    if (!isfinite(k1))
        throw IntegrationError(IntegrationError::Kind::NonFinite, "integrate_planar: non-finite field at start");
    tr.samples.push_back({y, s, k1});

    std::vector<double> g_prev(events.size());
    std::vector<bool> armed(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        g_prev[i] = events[i].fn(y, s);
        armed[i] = g_prev[i] != 0.0;
    }

    double h = opt.initial_step;
    if (!(h > 0.0)) {
        const double sc = std::max(opt.atol + opt.rtol * norm(s), 1e-300);
        const double d0 = norm(s) / sc, d1 = std::max(norm(k1) / sc, 1e-300);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    }
    h = std::min({h, opt.max_step, span_end - span_begin});

    bool last_rejected = false;
    bool positivity_trouble = false;

    while (y < span_end) {
        if (tr.meta.steps + tr.meta.rejected >= opt.max_steps)
            throw IntegrationError(IntegrationError::Kind::MaxSteps,
                                   "integrate_planar: step budget exhausted at y = " + std::to_string(y));
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(y))) {
            if (positivity_trouble)
                throw IntegrationError(IntegrationError::Kind::PositivityLost,
                                       "integrate_planar: state left the positive half-plane at y = " +
                                           std::to_string(y));
            throw IntegrationError(IntegrationError::Kind::StepUnderflow,
                                   "integrate_planar: step size underflow at y = " + std::to_string(y));
        }
        const bool final_step = y + h >= span_end;
        if (final_step)
            h = span_end - y;

        const Vec2 k2 = eval(y + DP5::c2 * h, s + h * (DP5::a21 * k1));
        const Vec2 k3 = eval(y + DP5::c3 * h, s + h * (DP5::a31 * k1 + DP5::a32 * k2));
        const Vec2 k4 = eval(y + DP5::c4 * h, s + h * (DP5::a41 * k1 + DP5::a42 * k2 + DP5::a43 * k3));
        const Vec2 k5 =
            eval(y + DP5::c5 * h, s + h * (DP5::a51 * k1 + DP5::a52 * k2 + DP5::a53 * k3 + DP5::a54 * k4));
        const Vec2 k6 = eval(y + h, s + h * (DP5::a61 * k1 + DP5::a62 * k2 + DP5::a63 * k3 + DP5::a64 * k4 +
                                             DP5::a65 * k5));
        const Vec2 s_new =
            s + h * (DP5::a71 * k1 + DP5::a73 * k3 + DP5::a74 * k4 + DP5::a75 * k5 + DP5::a76 * k6);
        const double y_new = final_step ? span_end : y + h;
        const Vec2 k7 = eval(y_new, s_new);

        const bool finite = isfinite(k2) && isfinite(k3) && isfinite(k4) && isfinite(k5) && isfinite(k6) &&
                            isfinite(s_new) && isfinite(k7);
        const bool positive = !opt.require_positive_first || s_new.x > 0.0;
        if (!finite || !positive) {
            positivity_trouble = opt.require_positive_first;
            ++tr.meta.rejected;
            h *= 0.25;
            last_rejected = true;
            continue;
        }

        const Vec2 e = h * (DP5::e1 * k1 + DP5::e3 * k3 + DP5::e4 * k4 + DP5::e5 * k5 + DP5::e6 * k6 +
                            DP5::e7 * k7);
        const double err = err_norm(e, s, s_new);
        if (err > 1.0) {
            ++tr.meta.rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            last_rejected = true;
            continue;
        }
        positivity_trouble = false;

        const Vec2 ydiff = s_new - s;
        const Vec2 bspl = h * k1 - ydiff;
        const detail::DenseStep dense{
            y, h, s, ydiff, bspl, ydiff - h * k7 - bspl,
            h * (DP5::d1 * k1 + DP5::d3 * k3 + DP5::d4 * k4 + DP5::d5 * k5 + DP5::d6 * k6 + DP5::d7 * k7)};

        // Events in (y, y_new].
        std::optional<EventHit> first_terminal;
        std::vector<EventHit> hits;
        for (std::size_t i = 0; i < events.size(); ++i) {
            const double g1 = events[i].fn(y_new, s_new);
            if (!armed[i]) {
                if (g1 != 0.0) {
                    armed[i] = true;
                    g_prev[i] = g1;
                }
                continue;
            }
            const bool crossed = (g1 == 0.0) || ((g_prev[i] > 0.0) != (g1 > 0.0));
            const int dir = g1 > g_prev[i] ? 1 : -1;
            if (crossed && (events[i].direction == 0 || events[i].direction == dir)) {
                double yc = y_new;
                if (g1 != 0.0) {
                    auto gy = [&](double yy) { return events[i].fn(yy, dense(yy)); };
                    yc = bracketed_root(gy, y, y_new, 1e-15);
                }
                EventHit hit{i, yc, yc == y_new ? s_new : dense(yc)};
                hits.push_back(hit);
                if (events[i].terminal && (!first_terminal || yc < first_terminal->y))
                    first_terminal = hit;
            }
            if (g1 != 0.0)
                g_prev[i] = g1;
        }
        std::sort(hits.begin(), hits.end(), [](const EventHit& a, const EventHit& b) { return a.y < b.y; });

        ++tr.meta.steps;
        if (first_terminal) {
            for (const auto& hit : hits)
                if (hit.y <= first_terminal->y)
                    tr.events.push_back(hit);
            const Vec2 rate = eval(first_terminal->y, first_terminal->state);
            if (first_terminal->y > y)
                tr.samples.push_back({first_terminal->y, first_terminal->state, rate});
            tr.terminated_by = first_terminal->event;
            return tr;
        }
        tr.events.insert(tr.events.end(), hits.begin(), hits.end());

        y = y_new;
        s = s_new;
        k1 = k7;
        tr.samples.push_back({y, s, k1});

        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
        h = std::min(h * fac, opt.max_step);
        last_rejected = false;
    }
    return tr;
}

template <class Field>
Trajectory integrate_planar(Field&& field, Vec2 init, double span_begin, double span_end,
                            const IntegratorOptions& opt, const std::vector<EventSpec>& events)
{
    return integrate_planar(std::forward<Field>(field), init, span_begin, span_end, opt,
                            std::span<const EventSpec>(events.data(), events.size()));
}

}  // namespace qhd
