#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "qhd/errors.hpp"

namespace qhd {

inline constexpr double kDefaultRootTol = 1e-12;

/// Root of a continuous fn on [lo, hi] with fn(lo) fn(hi) <= 0.
///
/// Brent-Dekker iteration (inverse quadratic / secant steps guarded by
/// bisection). Stops once the bracket is no wider than tol * max(1, |x|);
/// returns the end of the final bracket with the smaller |fn|.
template <class Fn>
double bracketed_root(Fn&& fn, double lo, double hi, double tol = kDefaultRootTol, int max_iter = 500)
{
    double a = lo, b = hi;
    double fa = fn(a), fb = fn(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw BracketError("bracketed_root: non-finite value at bracket end");
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw BracketError("bracketed_root: no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a, fc = fa;
    double d = b - a, e = d;

    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double width_tol = 0.5 * tol * std::max(1.0, std::abs(b));
        const double tol1 = 2.0 * eps * std::abs(b) + width_tol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol1 || fb == 0.0)
            return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                q = -q;
            else
                p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (m > 0.0 ? tol1 : -tol1);
        fb = fn(b);
        if (!std::isfinite(fb))
            throw BracketError("bracketed_root: non-finite value at x = " + std::to_string(b));
    }
    throw BracketError("bracketed_root: iteration limit reached");
}

}  // namespace qhd
