#pragma once

// Thermodynamic primitives for the barotropic law p = rho^gamma and the
// value types shared by the rest of the toolkit.

#include <cmath>
#include <string>

#include "qhd/errors.hpp"

namespace qhd {

/// Adiabatic exponent, viscosity and dispersion coefficients.
///
/// The small parameter epsilon of the model never appears: profiles live in
/// the stretched variable y = (x - s t) / epsilon, where it cancels.
class ModelParams {
public:
    ModelParams(double gamma, double mu, double k) : gamma_(gamma), mu_(mu), k_(k)
    {
        if (!(gamma >= 1.0) || !std::isfinite(gamma))
            throw DomainError("ModelParams: gamma must be >= 1, got " + std::to_string(gamma));
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw DomainError("ModelParams: mu must be > 0, got " + std::to_string(mu));
        if (!(k > 0.0) || !std::isfinite(k))
            throw DomainError("ModelParams: k must be > 0, got " + std::to_string(k));
    }

    double gamma() const noexcept { return gamma_; }
    double mu() const noexcept { return mu_; }
    double k() const noexcept { return k_; }

    /// gamma == 1 selects the logarithmic (isothermal) branch; no tolerance.
    bool isothermal() const noexcept { return gamma_ == 1.0; }

private:
    double gamma_;
    double mu_;
    double k_;
};

struct EulerState {
    double rho;
    double m;

    double u() const { return m / rho; }
};

/// End states and speed of a discontinuity of the inviscid system.
struct ShockData {
    double p_plus;
    double p_minus;
    double j_plus;
    double j_minus;
    double s;

    double u_plus() const { return j_plus / p_plus; }
    double u_minus() const { return j_minus / p_minus; }
};

namespace detail {

inline void require_positive(double rho, const char* who)
{
    if (!(rho > 0.0))
        throw DomainError(std::string(who) + ": density must be > 0, got " + std::to_string(rho));
}

}  // namespace detail

inline double pressure(double rho, double gamma)
{
    detail::require_positive(rho, "pressure");
    return std::pow(rho, gamma);
}

inline double enthalpy(double rho, double gamma)
{
    detail::require_positive(rho, "enthalpy");
    if (gamma == 1.0)
        return std::log(rho);
    return gamma / (gamma - 1.0) * std::pow(rho, gamma - 1.0);
}

/// c_s = sqrt(rho h'(rho)).
inline double sound_speed(double rho, double gamma)
{
    detail::require_positive(rho, "sound_speed");
    if (gamma == 1.0)
        return 1.0;
    return std::sqrt(gamma * std::pow(rho, gamma - 1.0));
}

/// (a^e - b^e) / (a - b) for a, b > 0, a != b, without cancellation when a ~ b.
inline double power_difference_quotient(double a, double b, double e)
{
    if (a == b)
        throw DegenerateInput("power_difference_quotient: equal arguments");
    if (e == 1.0)
        return 1.0;
    const double delta = (a - b) / b;
    return std::pow(b, e - 1.0) * std::expm1(e * std::log1p(delta)) / delta;
}

}  // namespace qhd
