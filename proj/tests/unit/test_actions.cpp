#include <gtest/gtest.h>

#include <cmath>

#include "entpack/actions.hpp"
#include "entpack/error.hpp"

using namespace entpack;

namespace {

const ModelParams kNear{0.19, 0.5, 2, 2.0, {}};
const ModelParams kFar{0.1, 0.5, 2, 1.0, {}};

}  // namespace

TEST(SingleClick, FidelityExamples) {
    EXPECT_DOUBLE_EQ(singleclick_fidelity(0.0, 2.0), 1.0);
    EXPECT_NEAR(singleclick_fidelity(1e-12, 2.0), 1.0, 1e-11);
    EXPECT_NEAR(singleclick_fidelity(1.0 - std::exp(-0.25), 2.0), 0.5, 1e-15);
    EXPECT_NEAR(singleclick_fidelity(0.1, 1.0), 1.0 + std::log(0.9), 1e-15);
    EXPECT_NEAR(singleclick_fidelity(0.1, 1.0), 0.89464, 1e-5);
}

TEST(SingleClick, CheckedFidelityRejectsBoundary) {
    EXPECT_THROW(singleclick_fidelity(1.0 - std::exp(-0.25), 2.0, 0.5), DomainError);
    EXPECT_THROW(singleclick_fidelity(0.0, 2.0, 0.5), DomainError);
    EXPECT_NO_THROW(singleclick_fidelity(0.1, 2.0, 0.5));
}

TEST(SingleClick, ProbabilityInvertsFidelity) {
    for (double p : {0.01, 0.1, 0.2, 0.35}) {
        EXPECT_NEAR(singleclick_probability(singleclick_fidelity(p, 1.0), 1.0), p, 1e-14);
    }
}

TEST(ExactBatched, Examples) {
    EXPECT_DOUBLE_EQ(exact_batched_probability(1.0, 2.0, 500), 0.0);
    EXPECT_NEAR(exact_batched_probability(0.9, 2.0, 1), 0.05, 1e-15);
    const double exact = exact_batched_probability(0.9, 2.0, 500);
    const double approx = singleclick_probability(0.9, 2.0);
    EXPECT_NEAR(approx, 1.0 - std::exp(-0.05), 1e-15);
    EXPECT_NEAR(approx, 0.048771, 1e-6);
    EXPECT_GT(exact, approx);
    EXPECT_LT(exact - approx, 1.3e-4);
}

TEST(ExactBatched, RejectsBadPerExecutionProbability) {
    EXPECT_THROW(exact_batched_probability(0.0, 0.5, 1), DomainError);
    EXPECT_THROW(exact_batched_probability(0.9, 2.0, 0), DomainError);
}

TEST(ErrorBound, Examples) {
    EXPECT_EQ(approximation_error_bound(1.0, 2.0, 500), 0.0);
    const double b1 = approximation_error_bound(0.9, 2.0, 500);
    EXPECT_NEAR(b1, 1.0 - std::pow(1.0 - 1e-4, 0.05), 1e-15);
    EXPECT_NEAR(b1, 5.0e-6, 1e-7);
    EXPECT_LE(exact_batched_probability(0.9, 2.0, 500) - singleclick_probability(0.9, 2.0), b1);
    const double b2 = approximation_error_bound(0.5, 1.0, 1000);
    EXPECT_NEAR(b2, 2.5e-4, 1e-6);
    EXPECT_LE(exact_batched_probability(0.5, 1.0, 1000) - singleclick_probability(0.5, 1.0), b2);
    EXPECT_THROW(approximation_error_bound(0.0, 0.5, 1), DomainError);
}

TEST(ErrorBound, DominatesGapOnGrid) {
    for (int m : {500, 1000}) {
        for (double lambda : {1.0, 2.0}) {
            for (int k = 1; k <= 1000; ++k) {
                const double f = 0.5 + 0.5 * k / 1001.0;
                const double gap = exact_batched_probability(f, lambda, m) - singleclick_probability(f, lambda);
                EXPECT_GE(gap, 0.0);
                EXPECT_LE(gap, approximation_error_bound(f, lambda, m));
            }
        }
    }
}

TEST(MaxSuccessProbability, Examples) {
    EXPECT_NEAR(max_success_probability(2.0, 0.5), 0.221199, 1e-6);
    EXPECT_NEAR(max_success_probability(1.0, 0.5), 0.393469, 1e-6);
    EXPECT_LT(max_success_probability(1e12, 0.5), 1e-12);
}

TEST(BuildActionSpace, NearTermFrozen) {
    const ActionSpace a = build_action_space(kNear);
    const double p[] = {0.221199216831245,  0.20056000296838805, 0.17487007990088244,
                        0.1426993613561185, 0.1021169672003005,  0.05046823255270705};
    ASSERT_EQ(a.size(), 6u);
    EXPECT_EQ(a.provenance(), Provenance::single_click);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].ttl, static_cast<int>(i) + 1);
        EXPECT_NEAR(a[i].p, p[i], 1e-12);
    }
}

TEST(BuildActionSpace, FarTermFrozen) {
    const ActionSpace a = build_action_space(kFar);
    const double p[] = {0.39346934013573387, 0.37731049433760155, 0.35895095399142474, 0.3380301697793996,
                        0.3141139858658817,  0.28667609849626385, 0.25507392927058936, 0.21851695329287646,
                        0.17602473466496638, 0.1263707754983614,  0.06800659658795694};
    ASSERT_EQ(a.size(), 11u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].ttl, static_cast<int>(i) + 1);
        EXPECT_NEAR(a[i].p, p[i], 1e-12);
    }
}

TEST(BuildActionSpace, Invariants) {
    for (const ModelParams& params : {kNear, kFar}) {
        const ActionSpace a = build_action_space(params);
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_GT(a[i].f, params.f_app);
            EXPECT_EQ(ttl_of_fidelity(a[i].f, params), a[i].ttl);
            EXPECT_NEAR(singleclick_fidelity(a[i].p, params.lambda), a[i].f, 1e-15);
            EXPECT_LT(a[i].p, max_success_probability(params.lambda, params.f_app));
            if (i > 0) {
                EXPECT_LT(a[i].p, a[i - 1].p);
                EXPECT_GT(a[i].f, a[i - 1].f);
            }
        }
    }
}

TEST(BuildActionSpace, ActionsAreNearBandSuprema) {
    for (const ModelParams& params : {kNear, kFar}) {
        const ActionSpace a = build_action_space(params);
        for (const Action& act : a) {
            // A slightly larger probability must fall into a lower TTL band or out of range.
            const double p_up = act.p + 1e-6;
            const double f_up = singleclick_fidelity(p_up, params.lambda);
            if (f_up > params.f_app) EXPECT_LT(ttl_of_fidelity(f_up, params), act.ttl);
        }
    }
}

TEST(BuildActionSpace, RestrictedQRaisesMinimumTtl) {
    ModelParams p = kFar;
    p.q = 0.3;
    const ActionSpace a = build_action_space(p);
    EXPECT_EQ(a.t_max(), 11);
    EXPECT_GT(a.t_min(), 1);
    EXPECT_LE(a[0].p, 0.3);
    for (const Action& act : a) EXPECT_EQ(ttl_of_fidelity(act.f, p), act.ttl);
}

TEST(BuildActionSpace, RejectsInfeasible) {
    ModelParams p = kNear;
    p.n = 7;
    EXPECT_THROW(build_action_space(p), InfeasibleError);
}

TEST(Synthetic, AcceptedVerbatim) {
    const ActionSpace a = ActionSpace::synthetic({{0.5, 0.0, 3}, {0.2, 0.0, 6}});
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0].ttl, 3);
    EXPECT_EQ(a.max_probability_action(), 0u);
    EXPECT_EQ(a.best_action_with_ttl_at_least(4), 1u);
    EXPECT_EQ(a.best_action_with_ttl_at_least(7), a.size());
}

TEST(Synthetic, RejectsBadOrdering) {
    EXPECT_THROW(ActionSpace::synthetic({}), DomainError);
    EXPECT_THROW(ActionSpace::synthetic({{0.2, 0.0, 3}, {0.5, 0.0, 6}}), DomainError);
    EXPECT_THROW(ActionSpace::synthetic({{0.5, 0.0, 6}, {0.2, 0.0, 3}}), DomainError);
}

TEST(Synthetic, EqualProbabilityTiesPreferLargerTtl) {
    const ActionSpace a = ActionSpace::synthetic({{0.4, 0.0, 2}, {0.4, 0.0, 5}});
    EXPECT_EQ(a.max_probability_action(), 1u);
}
