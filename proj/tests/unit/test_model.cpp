#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "entpack/error.hpp"
#include "entpack/model.hpp"

using namespace entpack;

TEST(FidelityAfter, ZeroStepsIsIdentity) { EXPECT_DOUBLE_EQ(fidelity_after(0.8, 0, 0.19), 0.8); }

TEST(FidelityAfter, ApproachesQuarter) { EXPECT_NEAR(fidelity_after(0.26, 1000, 0.19), 0.25, 1e-12); }

TEST(FidelityAfter, PerfectLinkAfterSixNearTermSteps) {
    const double f = fidelity_after(1.0, 6, 0.19);
    EXPECT_NEAR(f, 0.25 + 0.75 * std::exp(-1.14), 1e-15);
    EXPECT_NEAR(f, 0.489864, 1e-6);
    EXPECT_LT(f, 0.5);
}

TEST(FidelityAfter, RejectsBadInputs) {
    EXPECT_THROW(fidelity_after(0.25, 1, 0.1), DomainError);
    EXPECT_THROW(fidelity_after(1.01, 1, 0.1), DomainError);
    EXPECT_THROW(fidelity_after(0.8, 1, 0.0), DomainError);
    EXPECT_THROW(fidelity_after(0.8, -1, 0.1), DomainError);
}

TEST(FidelityAfter, StrictlyDecreasing) {
    for (std::int64_t t = 0; t < 50; ++t) EXPECT_GT(fidelity_after(0.9, t, 0.1), fidelity_after(0.9, t + 1, 0.1));
}

TEST(TtlOfFidelity, TableOneMaxima) {
    EXPECT_EQ(ttl_of_fidelity(1.0, 0.19, 0.5), 6);
    EXPECT_EQ(ttl_of_fidelity(1.0, 0.1, 0.5), 11);
    EXPECT_EQ(max_ttl(ModelParams{0.19, 0.5, 2, 2.0, {}}), 6);
    EXPECT_EQ(max_ttl(ModelParams{0.1, 0.5, 2, 1.0, {}}), 11);
}

TEST(TtlOfFidelity, JustAboveThresholdIsOne) {
    for (double g : {0.01, 0.1, 0.19, 1.0, 5.0}) EXPECT_EQ(ttl_of_fidelity(0.5 + 1e-9, g, 0.5), 1);
}

TEST(TtlOfFidelity, ExactIntegerDecayTimeIsNotRoundedUp) { EXPECT_EQ(max_ttl(std::log(3.0), 0.5), 1); }

TEST(TtlOfFidelity, RejectsNonViable) {
    EXPECT_THROW(ttl_of_fidelity(0.5, 0.1, 0.5), DomainError);
    EXPECT_THROW(ttl_of_fidelity(0.4, 0.1, 0.5), DomainError);
}

TEST(TtlOfFidelity, RoundTripAtIntegerDecayTimes) {
    for (double gamma : {0.1, 0.19}) {
        const int t_max = max_ttl(gamma, 0.5);
        for (int t = 1; t <= t_max; ++t) {
            const double f = 0.25 + 0.25 * std::exp(gamma * t);
            if (f > 1.0) continue;
            EXPECT_NEAR(fidelity_after(f, t, gamma), 0.5, 1e-12);
            EXPECT_EQ(ttl_of_fidelity(f, gamma, 0.5), t);
        }
    }
}

TEST(TtlOfFidelity, ThresholdProperty) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> fid(0.5 + 1e-6, 1.0);
    std::uniform_real_distribution<double> rate(0.01, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double f = fid(rng);
        const double g = rate(rng);
        const int ttl = ttl_of_fidelity(f, g, 0.5);
        ASSERT_GE(ttl, 1);
        if (ttl >= 2) EXPECT_GT(fidelity_after(f, ttl - 1, g), 0.5);
        EXPECT_LE(fidelity_after(f, ttl, g), 0.5 + 1e-12);
    }
}

TEST(TtlOfFidelity, Monotone) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> fid(0.5 + 1e-6, 1.0);
    std::uniform_real_distribution<double> rate(0.01, 1.0);
    for (int i = 0; i < 2000; ++i) {
        double f1 = fid(rng), f2 = fid(rng);
        double g1 = rate(rng), g2 = rate(rng);
        if (f1 > f2) std::swap(f1, f2);
        if (g1 > g2) std::swap(g1, g2);
        EXPECT_LE(ttl_of_fidelity(f1, g1, 0.5), ttl_of_fidelity(f2, g1, 0.5));
        EXPECT_GE(ttl_of_fidelity(f1, g1, 0.5), ttl_of_fidelity(f1, g2, 0.5));
    }
}

TEST(Validate, AcceptsPresetsAndRejectsViolations) {
    EXPECT_NO_THROW(validate(ModelParams{0.19, 0.5, 5, 2.0, {}}));
    EXPECT_NO_THROW(validate(ModelParams{0.1, 0.5, 11, 1.0, 0.3}));
    EXPECT_THROW(validate(ModelParams{0.19, 0.5, 7, 2.0, {}}), InfeasibleError);
    EXPECT_THROW(validate(ModelParams{-0.1, 0.5, 2, 2.0, {}}), DomainError);
    EXPECT_THROW(validate(ModelParams{0.1, 0.25, 2, 2.0, {}}), DomainError);
    EXPECT_THROW(validate(ModelParams{0.1, 0.5, 2, 0.0, {}}), DomainError);
    EXPECT_THROW(validate(ModelParams{0.1, 0.5, 1, 1.0, {}}), DomainError);
    EXPECT_THROW(validate(ModelParams{0.1, 0.5, 2, 1.0, 0.5}), DomainError);
}
