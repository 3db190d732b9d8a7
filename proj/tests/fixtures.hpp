#pragma once

// Reference systems and frozen high-precision values (50-digit evaluation,
// see oracle/compute_oracles.py) shared by the test programs.

#include <cmath>

#include "qhd/rankine_hugoniot.hpp"
#include "qhd/wave_functions.hpp"

namespace fixtures {

inline const double kSqrt2 = std::sqrt(2.0);

// Shock P+ = 1.2, P- = 2, s = 1, gamma = 3/2, mu = 0.3, k = sqrt 2.
namespace shock {
inline constexpr double d = 2.1311215263802705712;
inline constexpr double j_plus = -0.93112152638027057115;
inline constexpr double A = 2.1311215263802705712;
inline constexpr double B = 2.9681450784666066644;
inline constexpr double fprime_plus = -1.5107760498465671290;
inline constexpr double fprime_minus = 0.98590060350929900422;
inline constexpr double oscillation_lhs = 0.21213203435596425732;
inline constexpr double oscillation_rhs = 1.7382612288413770687;
inline constexpr double focus_discriminant = -5.9531041993862685161;  // 2 k^2 f'(P+) + s^2 mu^2
inline constexpr double p0 = 1.5575789494356057518;
inline constexpr double p_star = 0.96499832348199221531;
inline constexpr double F_at_1e_6 = -2270834380834.08;
inline constexpr double saddle_lambda1 = 0.85419151734581934987;
inline constexpr double saddle_v1_first = -1.1706976476507786492;
}  // namespace shock

// Standing wave rho+ = 2, u+ = 0.8, gamma = 3/2, k = sqrt 2 (nonlinear viscosity).
namespace standing {
inline constexpr double C1 = -1.6;
inline constexpr double C2 = -4.5626406871192851464;
inline constexpr double gprime_plus = 2.9626406871192851464;
inline constexpr double v2 = 0.91671129063527759435;
inline constexpr double v0 = 1.1397302969840029776;
inline constexpr double v_star = 0.71411424900536743657;
inline constexpr double u_at_v_star = 3.1375061446401464638;
inline constexpr double G_at_1e_4 = -32000000.000000011406;
}  // namespace standing

// Linear-viscosity standing wave P+ = 2, u+ = 0.8, gamma = 3/2, k = sqrt 2.
namespace linear_standing {
inline constexpr double p2 = 0.73636414496041493855;
inline constexpr double p0 = 1.2383958344009222918;
inline constexpr double p_star = 0.50995916063249992687;
}  // namespace linear_standing

inline qhd::ModelParams shock_params(double mu = 0.3) { return qhd::ModelParams(1.5, mu, kSqrt2); }
inline qhd::ShockData shock_data() { return qhd::admissible_branch(1.2, 2.0, 1.0, 1.5); }
inline qhd::LinearWaveSystem shock_system(double mu = 0.3)
{
    return qhd::build_linear_system(shock_data(), shock_params(mu));
}
inline qhd::StandingSystem standing_system()
{
    return qhd::build_standing_system(2.0, 0.8, qhd::ModelParams(1.5, 1.0, kSqrt2));
}
inline qhd::StandingSystem sonic_system()
{
    return qhd::build_standing_system(1.0, std::sqrt(1.5), qhd::ModelParams(1.5, 1.0, 1.0));
}
inline qhd::LinearWaveSystem linear_standing_system()
{
    return qhd::build_linear_standing_system(2.0, 0.8, qhd::ModelParams(1.5, 1.0, kSqrt2));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace fixtures
