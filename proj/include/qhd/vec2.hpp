#pragma once

#include <cmath>

namespace qhd {

/// Point or tangent vector of the profile phase plane: (P, Q) or (V, W).
struct Vec2 {
    double x = 0.0;
    double w = 0.0;

    constexpr Vec2& operator+=(const Vec2& o)
    {
        x += o.x;
        w += o.w;
        return *this;
    }
    constexpr Vec2& operator-=(const Vec2& o)
    {
        x -= o.x;
        w -= o.w;
        return *this;
    }
    constexpr Vec2& operator*=(double a)
    {
        x *= a;
        w *= a;
        return *this;
    }

    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.w}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

inline double norm(const Vec2& v) { return std::hypot(v.x, v.w); }

inline bool isfinite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.w); }

}  // namespace qhd
