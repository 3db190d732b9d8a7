#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qhd/model.hpp"

using namespace qhd;

TEST(ModelParams, AcceptsValidAndExposesFields)
{
    const ModelParams p(1.5, 0.3, 2.0);
    EXPECT_EQ(p.gamma(), 1.5);
    EXPECT_EQ(p.mu(), 0.3);
    EXPECT_EQ(p.k(), 2.0);
    EXPECT_FALSE(p.isothermal());
    EXPECT_TRUE(ModelParams(1.0, 1.0, 1.0).isothermal());
}

TEST(ModelParams, RejectsOutOfRange)
{
    EXPECT_THROW(ModelParams(0.999, 1.0, 1.0), DomainError);
    EXPECT_THROW(ModelParams(1.5, 0.0, 1.0), DomainError);
    EXPECT_THROW(ModelParams(1.5, -1.0, 1.0), DomainError);
    EXPECT_THROW(ModelParams(1.5, 1.0, 0.0), DomainError);
    EXPECT_THROW(ModelParams(std::nan(""), 1.0, 1.0), DomainError);
    EXPECT_THROW(ModelParams(1.5, std::numeric_limits<double>::infinity(), 1.0), DomainError);
}

TEST(EulerState, VelocityIsMomentumOverDensity)
{
    const EulerState w{2.0, 3.0};
    EXPECT_DOUBLE_EQ(w.u(), 1.5);
}

TEST(Pressure, Values)
{
    EXPECT_EQ(pressure(1.0, 2.7), 1.0);
    EXPECT_EQ(pressure(2.0, 1.0), 2.0);
    EXPECT_NEAR(pressure(2.0, 1.5), 2.8284271247461900976, 1e-15);
    EXPECT_THROW(pressure(0.0, 1.5), DomainError);
    EXPECT_THROW(pressure(-1.0, 1.5), DomainError);
}

TEST(Enthalpy, Values)
{
    EXPECT_EQ(enthalpy(1.0, 1.0), 0.0);
    EXPECT_NEAR(enthalpy(2.0, 1.5), 4.2426406871192851464, 1e-14);
    EXPECT_NEAR(enthalpy(std::exp(1.0), 1.0), 1.0, 1e-15);
    EXPECT_THROW(enthalpy(0.0, 1.0), DomainError);
}

TEST(SoundSpeed, Values)
{
    EXPECT_EQ(sound_speed(5.0, 1.0), 1.0);
    EXPECT_NEAR(sound_speed(1.0, 1.5), 1.2247448713915890491, 1e-15);
    EXPECT_NEAR(sound_speed(2.0, 1.5), 1.4564753151219702609, 1e-15);
    EXPECT_THROW(sound_speed(-2.0, 1.5), DomainError);
}

TEST(ModelProperties, SoundSpeedSquaredIsGammaPressureOverDensity)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lr(-5.0, 5.0), g(1.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double rho = std::exp(lr(rng));
        const double gamma = i % 5 == 0 ? 1.0 : g(rng);
        const double c = sound_speed(rho, gamma);
        EXPECT_GT(c, 0.0);
        const double expect = gamma * pressure(rho, gamma) / rho;
        EXPECT_LT(std::abs(c * c - expect) / expect, 1e-12) << rho << " " << gamma;
    }
}

TEST(ModelProperties, EnthalpyStrictlyIncreasing)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> lr(-5.0, 5.0), g(1.0, 3.0), step(1e-6, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double gamma = i % 4 == 0 ? 1.0 : g(rng);
        const double r1 = std::exp(lr(rng));
        const double r2 = r1 * (1.0 + step(rng));
        EXPECT_GT(enthalpy(r2, gamma), enthalpy(r1, gamma));
    }
}

TEST(PowerDifferenceQuotient, MatchesDirectFormulaAndLimits)
{
    EXPECT_NEAR(power_difference_quotient(2.0, 1.0, 2.0), 3.0, 1e-15);
    EXPECT_NEAR(power_difference_quotient(1.2, 2.0, 1.5), (std::pow(1.2, 1.5) - std::pow(2.0, 1.5)) / (1.2 - 2.0),
                1e-14);
    EXPECT_EQ(power_difference_quotient(3.0, 0.5, 1.0), 1.0);
    // Close arguments approach the derivative e b^(e-1).
    EXPECT_NEAR(power_difference_quotient(1.0 + 1e-12, 1.0, 2.5), 2.5, 1e-10);
    EXPECT_THROW(power_difference_quotient(1.0, 1.0, 2.0), DegenerateInput);
}
