#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "qhd/structure.hpp"

using namespace qhd;
namespace fx = fixtures;

namespace {

template <class System>
int sign_changes_on_log_grid(const System& sys)
{
    int count = 0;
    double prev = restoring_jet(sys, 1e-8).value;
    for (int i = 1; i <= 16000; ++i) {
        const double x = 1e-8 * std::pow(10.0, i / 1000.0);
        const double v = restoring_jet(sys, x).value;
        if ((v > 0.0) != (prev > 0.0))
            ++count;
        prev = v;
    }
    return count;
}

}  // namespace

TEST(BracketedRoot, Examples)
{
    EXPECT_NEAR(bracketed_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-14), fx::kSqrt2, 1e-14);
    const LinearWaveSystem sys = fx::shock_system();
    EXPECT_NEAR(bracketed_root([&](double p) { return f_family(sys, p).value; }, 0.01, 1.9, 1e-12), 1.2, 1e-12);
    EXPECT_NEAR(bracketed_root([](double x) { return x * x * x; }, -1.0, 1.0, 1e-12), 0.0, 1e-12);
}

TEST(BracketedRoot, Errors)
{
    EXPECT_THROW(bracketed_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketError);
    EXPECT_THROW(bracketed_root([](double x) { return x > 0.5 ? NAN : x - 1.0; }, 0.0, 2.0), Error);
}

TEST(BracketedRoot, EndpointRoots)
{
    EXPECT_EQ(bracketed_root([](double x) { return x - 1.0; }, 1.0, 3.0), 1.0);
    EXPECT_EQ(bracketed_root([](double x) { return x - 3.0; }, 1.0, 3.0), 3.0);
}

TEST(StructuralPoints, ShockSystem)
{
    const LinearWaveSystem sys = fx::shock_system();
    const StructuralPoints sp = structural_points(sys);
    EXPECT_EQ(sp.layout, RootLayout::OtherRootBelow);
    EXPECT_EQ(sp.reference_root, 2.0);
    ASSERT_TRUE(sp.second_root && sp.derivative_zero && sp.turning_point);
    EXPECT_EQ(*sp.second_root, 1.2);
    EXPECT_NEAR(*sp.derivative_zero, fx::shock::p0, 1e-12);
    EXPECT_NEAR(*sp.turning_point, fx::shock::p_star, 1e-12);
    EXPECT_LT(std::abs(f_family(sys, *sp.derivative_zero).d1), 1e-12);
    EXPECT_LT(std::abs(F_eval(sys, *sp.turning_point) - F_eval(sys, 2.0)), 1e-10);
    EXPECT_LT(0.0, *sp.turning_point);
    EXPECT_LT(*sp.turning_point, 1.2);
    EXPECT_LT(1.2, *sp.derivative_zero);
    EXPECT_LT(*sp.derivative_zero, 2.0);
}

TEST(StructuralPoints, LinearStanding)
{
    const StructuralPoints sp = structural_points(fx::linear_standing_system());
    EXPECT_EQ(sp.layout, RootLayout::OtherRootBelow);
    ASSERT_TRUE(sp.second_root && sp.derivative_zero && sp.turning_point);
    EXPECT_NEAR(*sp.second_root, fx::linear_standing::p2, 1e-12);
    EXPECT_NEAR(*sp.derivative_zero, fx::linear_standing::p0, 1e-12);
    EXPECT_NEAR(*sp.turning_point, fx::linear_standing::p_star, 1e-12);
}

TEST(StructuralPoints, LinearStandingZeroVelocityHasNoTurningPoint)
{
    const LinearWaveSystem sys = build_linear_standing_system(2.0, 0.0, ModelParams(1.5, 1.0, 1.0));
    const StructuralPoints sp = structural_points(sys);
    EXPECT_EQ(sp.layout, RootLayout::SingleRoot);
    EXPECT_FALSE(sp.turning_point);
    for (double P : {1e-3, 0.5, 1.9, 2.1, 10.0})
        EXPECT_GT(F_eval(sys, P) - F_eval(sys, 2.0), 0.0);
}

TEST(StructuralPoints, FigureTwoStanding)
{
    const StandingSystem sys = fx::standing_system();
    const StructuralPoints sp = structural_points(sys);
    EXPECT_EQ(sp.layout, RootLayout::OtherRootBelow);
    ASSERT_TRUE(sp.second_root && sp.derivative_zero && sp.turning_point);
    EXPECT_NEAR(*sp.second_root, fx::standing::v2, 1e-12);
    EXPECT_NEAR(*sp.derivative_zero, fx::standing::v0, 1e-12);
    EXPECT_NEAR(*sp.turning_point, fx::standing::v_star, 1e-12);
    EXPECT_LT(*sp.turning_point, *sp.second_root);
    EXPECT_LT(*sp.second_root, *sp.derivative_zero);
    EXPECT_LT(*sp.derivative_zero, sys.v_plus);
    EXPECT_LT(std::abs(g_family(sys, *sp.second_root).value), 1e-10);
    EXPECT_LT(std::abs(g_family(sys, *sp.derivative_zero).d1), 1e-10);
    EXPECT_LT(std::abs(energy_H1(sys, *sp.turning_point, 0.0)), 1e-10);
}

TEST(StructuralPoints, SonicIsDoubleRoot)
{
    const StructuralPoints sp = structural_points(fx::sonic_system());
    EXPECT_EQ(sp.layout, RootLayout::DoubleRoot);
    EXPECT_FALSE(sp.turning_point);
}

TEST(StructuralPoints, SupersonicRootAbove)
{
    const StandingSystem sys = build_standing_system(1.0, 2.0, ModelParams(1.5, 1.0, 1.0));
    const StructuralPoints sp = structural_points(sys);
    EXPECT_EQ(sp.layout, RootLayout::OtherRootAbove);
    ASSERT_TRUE(sp.second_root);
    EXPECT_GT(*sp.second_root, sys.v_plus);
    EXPECT_LT(std::abs(g_family(sys, *sp.second_root).value), 1e-10 * value_scale(sys, *sp.second_root));
}

TEST(StructuralPoints, ResidualsOnRandomSystems)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> rho(0.2, 5.0), mach(0.05, 0.95), gam(1.0, 3.0), kk(0.5, 3.0);
    for (int i = 0; i < 300; ++i) {
        const ModelParams params(i % 3 == 0 ? 1.0 : gam(rng), 1.0, kk(rng));
        const double r = rho(rng);
        const double u = mach(rng) * sound_speed(r, params.gamma());
        const StandingSystem sys = build_standing_system(r, u, params);
        const StructuralPoints sp = structural_points(sys);
        ASSERT_TRUE(sp.second_root && sp.derivative_zero && sp.turning_point);
        ASSERT_LT(std::abs(g_family(sys, *sp.second_root).value), 1e-10 * value_scale(sys, *sp.second_root));
        ASSERT_LT(std::abs(g_family(sys, *sp.derivative_zero).d1),
                  1e-10 * derivative_scale(sys, *sp.derivative_zero));
        const double dG = G_eval(sys, *sp.turning_point) - G_eval(sys, sys.v_plus);
        ASSERT_LT(std::abs(dG), 1e-10 * std::max(1.0, std::abs(G_eval(sys, sys.v_plus))));
        ASSERT_LT(*sp.turning_point, *sp.second_root);
        ASSERT_LT(*sp.second_root, *sp.derivative_zero);
        ASSERT_LT(*sp.derivative_zero, sys.v_plus);
    }
}

TEST(RootCount, LogGridScan)
{
    EXPECT_EQ(sign_changes_on_log_grid(fx::shock_system()), 2);
    EXPECT_EQ(sign_changes_on_log_grid(fx::linear_standing_system()), 2);
    EXPECT_EQ(sign_changes_on_log_grid(fx::standing_system()), 2);
    EXPECT_EQ(sign_changes_on_log_grid(build_standing_system(1.0, 2.0, ModelParams(1.5, 1.0, 1.0))), 2);
    EXPECT_EQ(sign_changes_on_log_grid(build_standing_system(1.0, 0.0, ModelParams(1.5, 1.0, 1.0))), 1);
    // The sonic double root only touches zero; away from roundoff g stays nonnegative.
    const StandingSystem sonic = fx::sonic_system();
    for (int i = 0; i <= 16000; ++i) {
        const double x = 1e-8 * std::pow(10.0, i / 1000.0);
        ASSERT_GE(g_family(sonic, x).value, -1e-14 * value_scale(sonic, x)) << x;
    }
}

TEST(Equilibrium, ShockSaddle)
{
    const LinearWaveSystem sys = fx::shock_system();
    const EquilibriumReport rep = equilibrium_analysis(sys, 2.0, true);
    EXPECT_EQ(rep.kind, EquilibriumKind::Saddle);
    EXPECT_NEAR(rep.eigenvalues[0].real(), fx::shock::saddle_lambda1, 1e-12);
    ASSERT_TRUE(rep.eigenvectors);
    EXPECT_NEAR((*rep.eigenvectors)[0].x, fx::shock::saddle_v1_first, 1e-12);
    EXPECT_EQ((*rep.eigenvectors)[0].w, -1.0);

    const double fp = fx::shock::fprime_minus, smu = 0.3, k2 = 2.0;
    const double root = std::sqrt(2.0 * k2 * fp + smu * smu);
    EXPECT_NEAR((*rep.eigenvectors)[0].x, -(smu + root) / (2.0 * fp), 1e-12);
    EXPECT_NEAR(rep.eigenvalues[0].real(), (-smu + root) / k2, 1e-12);
    EXPECT_NEAR(rep.eigenvalues[1].real(), (-smu - root) / k2, 1e-12);
}

TEST(Equilibrium, ShockFocus)
{
    const EquilibriumReport rep = equilibrium_analysis(fx::shock_system(), 1.2, true);
    EXPECT_EQ(rep.kind, EquilibriumKind::StableFocus);
    EXPECT_FALSE(rep.eigenvectors);
    EXPECT_LT(rep.eigenvalues[0].real(), 0.0);
    const double k4 = 4.0;
    EXPECT_NEAR(rep.discriminant, 4.0 / k4 * fx::shock::focus_discriminant, 1e-12);
    EXPECT_TRUE(rep.energy_local_max);
}

TEST(Equilibrium, StrongViscosityGivesNode)
{
    const EquilibriumReport rep = equilibrium_analysis(fx::shock_system(100.0), 1.2, true);
    EXPECT_EQ(rep.kind, EquilibriumKind::StableNode);
    EXPECT_LT(rep.eigenvalues[0].real(), 0.0);
    EXPECT_LT(rep.eigenvalues[1].real(), 0.0);
}

TEST(Equilibrium, SonicNonhyperbolic)
{
    const EquilibriumReport rep = equilibrium_analysis(fx::sonic_system(), 1.0, false);
    EXPECT_EQ(rep.kind, EquilibriumKind::Nonhyperbolic);
}

TEST(Equilibrium, StandingSaddleAndCenter)
{
    const StandingSystem sys = fx::standing_system();
    const EquilibriumReport sad = equilibrium_analysis(sys, sys.v_plus, false);
    EXPECT_EQ(sad.kind, EquilibriumKind::Saddle);
    EXPECT_NEAR(sad.eigenvalues[0].real(), std::sqrt(fx::standing::gprime_plus / 2.0), 1e-12);
    const EquilibriumReport ctr = equilibrium_analysis(sys, fx::standing::v2, false);
    EXPECT_EQ(ctr.kind, EquilibriumKind::EnergyLocalMax);
    EXPECT_TRUE(ctr.energy_local_max);
    EXPECT_NEAR(ctr.hessian_diag[0], g_family(sys, fx::standing::v2).d1 / 2.0, 1e-12);
    EXPECT_EQ(ctr.hessian_diag[1], -1.0);
}

TEST(Equilibrium, NotAnEquilibrium)
{
    EXPECT_THROW(equilibrium_analysis(fx::shock_system(), 1.5, true), NotEquilibrium);
    EXPECT_THROW(equilibrium_analysis(fx::standing_system(), 1.0, false), NotEquilibrium);
    EXPECT_THROW(equilibrium_analysis(fx::shock_system(), 0.0, true), DomainError);
}

TEST(Equilibrium, EigenvectorsPointInsideLoop)
{
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> pp(0.2, 3.0), ratio(1.05, 4.0), sp(0.05, 3.0), g(1.0, 3.0),
        mu(0.01, 5.0), kk(0.3, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const double p_plus = pp(rng);
        const double p_minus = p_plus * ratio(rng);
        const double gamma = i % 5 == 0 ? 1.0 : g(rng);
        const ModelParams params(gamma, mu(rng), kk(rng));
        const LinearWaveSystem sys = build_linear_system(admissible_branch(p_plus, p_minus, sp(rng), gamma), params);
        const EquilibriumReport full = equilibrium_analysis(sys, p_minus, true);
        const EquilibriumReport reduced = equilibrium_analysis(sys, p_minus, false);
        ASSERT_EQ(full.kind, EquilibriumKind::Saddle);
        ASSERT_TRUE(full.eigenvectors && reduced.eigenvectors);
        ASSERT_GT((*reduced.eigenvectors)[0].x, (*full.eigenvectors)[0].x);
        ASSERT_GT((*reduced.eigenvectors)[1].x, (*full.eigenvectors)[1].x);
        const double a = linear_coefficient(sys, full.restoring_derivative);
        ASSERT_NEAR((*reduced.eigenvectors)[1].x, 1.0 / std::sqrt(a), 1e-12 * (1.0 + 1.0 / std::sqrt(a)));
    }
}

TEST(Oscillation, ShockCriterion)
{
    const OscillationCriterion oc = oscillation_test(fx::shock_system());
    EXPECT_NEAR(oc.lhs, fx::shock::oscillation_lhs, 1e-14);
    EXPECT_NEAR(oc.rhs, fx::shock::oscillation_rhs, 1e-12);
    EXPECT_TRUE(oc.holds);
    EXPECT_FALSE(oscillation_criterion(fx::shock_system(100.0)));
}

TEST(Oscillation, AgreesWithFocusAndSmallSpeed)
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> pp(0.2, 3.0), ratio(1.05, 4.0), sp(0.05, 3.0), g(1.0, 3.0),
        mu(0.01, 5.0), kk(0.3, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const double p_plus = pp(rng);
        const double p_minus = p_plus * ratio(rng);
        const double gamma = g(rng);
        const ModelParams params(gamma, mu(rng), kk(rng));
        const LinearWaveSystem sys = build_linear_system(admissible_branch(p_plus, p_minus, sp(rng), gamma), params);
        const EquilibriumKind kind = equilibrium_analysis(sys, p_plus, true).kind;
        if (oscillation_criterion(sys))
            ASSERT_EQ(kind, EquilibriumKind::StableFocus);
        else
            ASSERT_EQ(kind, EquilibriumKind::StableNode);
        const LinearWaveSystem slow =
            build_linear_system(admissible_branch(p_plus, p_minus, 1e-8, gamma), params);
        ASSERT_TRUE(oscillation_criterion(slow));
    }
}

TEST(Oscillation, MirroredCase)
{
    // Case (ii): P- < P+ with s < 0; the attracting state is P-.
    const LinearWaveSystem sys = build_linear_system(admissible_branch(2.0, 1.2, -1.0, 1.5), fx::shock_params());
    const OscillationCriterion oc = oscillation_test(sys);
    EXPECT_NEAR(oc.lhs, fx::shock::oscillation_lhs, 1e-14);
    EXPECT_NEAR(oc.rhs, fx::shock::oscillation_rhs, 1e-12);
}

TEST(StandingVerdict, Examples)
{
    EXPECT_EQ(standing_existence_verdict(2.0, 0.8, ModelParams(1.5, 1.0, fx::kSqrt2)), StandingVerdict::Exists);
    EXPECT_EQ(standing_existence_verdict(2.0, 0.0, ModelParams(1.5, 1.0, 1.0)), StandingVerdict::NoneZeroVelocity);
    EXPECT_EQ(standing_existence_verdict(1.0, std::sqrt(1.5), ModelParams(1.5, 1.0, 1.0)), StandingVerdict::NoneSonic);
    EXPECT_EQ(standing_existence_verdict(1.0, -std::sqrt(1.5), ModelParams(1.5, 1.0, 1.0), Viscosity::Linear),
              StandingVerdict::NoneSonic);
    EXPECT_EQ(standing_existence_verdict(1.0, 2.0, ModelParams(1.5, 1.0, 1.0)), StandingVerdict::NoneSupersonic);
    EXPECT_EQ(standing_existence_verdict(1.0, -0.5, ModelParams(1.0, 1.0, 1.0)), StandingVerdict::Exists);
    EXPECT_THROW(standing_existence_verdict(0.0, 0.5, ModelParams(1.0, 1.0, 1.0)), DomainError);
}

TEST(ZeroSpeed, LinearCaseOne)
{
    const ModelParams params = fx::shock_params();
    const ZeroSpeedReport rep = heteroclinic_nonexistence_s0(1.2, 2.0, params, Viscosity::Linear);
    ASSERT_TRUE(rep.in_scope);
    EXPECT_EQ(rep.flagged_end, EndState::Plus);
    EXPECT_EQ(rep.flagged_state, 1.2);
    EXPECT_LT(rep.flagged_derivative, 0.0);
    EXPECT_TRUE(rep.sign_pattern_ok);
    EXPECT_NEAR(rep.hessian_diag[0], rep.flagged_derivative / (1.2 * 1.2), 1e-14);  // (2/k^2) = 1
    EXPECT_NEAR(rep.hessian_diag[1], -1.0 / (1.2 * 1.2), 1e-14);
}

TEST(ZeroSpeed, CaseTwoAndOutOfScope)
{
    const ModelParams params = fx::shock_params();
    for (Viscosity v : {Viscosity::Linear, Viscosity::Nonlinear}) {
        const ZeroSpeedReport rep = heteroclinic_nonexistence_s0(2.0, 1.2, params, v);
        EXPECT_EQ(rep.flagged_end, EndState::Minus);
        EXPECT_TRUE(rep.sign_pattern_ok);
        EXPECT_FALSE(heteroclinic_nonexistence_s0(1.5, 1.5, params, v).in_scope);
    }
}

TEST(ZeroSpeed, RandomSignPattern)
{
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> lp(std::log(0.1), std::log(10.0)), g(1.0, 3.0), kk(0.5, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = std::exp(lp(rng)), b = std::exp(lp(rng));
        if (a == b)
            continue;
        const ModelParams params(i % 4 == 0 ? 1.0 : g(rng), 1.0, kk(rng));
        const ZeroSpeedReport rep =
            heteroclinic_nonexistence_s0(a, b, params, i % 2 ? Viscosity::Linear : Viscosity::Nonlinear);
        ASSERT_TRUE(rep.sign_pattern_ok) << a << " " << b;
        ASSERT_EQ(rep.flagged_state, std::min(a, b));
    }
}
