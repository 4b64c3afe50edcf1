#include <gtest/gtest.h>

#include <map>
#include <memory>

#include "entpack/actions.hpp"
#include "entpack/error.hpp"
#include "entpack/transitions.hpp"

using namespace entpack;

namespace {

State st(std::vector<int> v) { return State::from_sorted(std::move(v)); }

std::shared_ptr<const StateSpace> make_space(int n, int t_max, bool reduced) {
    return std::make_shared<const StateSpace>(StateSpace::enumerate(n, t_max, reduced));
}

ActionSpace regime_actions(double gamma, double lambda, int n) {
    return build_action_space(ModelParams{gamma, 0.5, n, lambda, {}});
}

}  // namespace

TEST(Successors, AgesAndInserts) {
    const auto out = successors(st({3, 2}), Action{0.4, 0.0, 4}, 4);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].next, st({4, 2, 1}));
    EXPECT_DOUBLE_EQ(out[0].probability, 0.4);
    EXPECT_EQ(out[1].next, st({2, 1}));
    EXPECT_DOUBLE_EQ(out[1].probability, 0.6);
}

TEST(Successors, FromEmptyState) {
    const auto out = successors(State{}, Action{0.3, 0.0, 5}, 2);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].next, st({5}));
    EXPECT_DOUBLE_EQ(out[0].probability, 0.3);
    EXPECT_TRUE(out[1].next.empty());
    EXPECT_DOUBLE_EQ(out[1].probability, 0.7);
}

TEST(Successors, ExpiringLinkIsDroppedOnBothBranches) {
    const auto out = successors(st({1}), Action{0.4, 0.0, 4}, 3);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].next, st({4}));
    EXPECT_TRUE(out[1].next.empty());
}

TEST(Successors, DegenerateProbabilitiesGiveOneEntry) {
    EXPECT_EQ(successors(st({2}), Action{1.0, 0.0, 3}, 3).size(), 1u);
    const auto never = successors(st({2}), Action{0.0, 0.0, 3}, 3);
    ASSERT_EQ(never.size(), 1u);
    EXPECT_EQ(never[0].next, st({1}));
}

TEST(Successors, RejectsAbsorbing) {
    EXPECT_THROW(successors(st({4, 3}), Action{0.5, 0.0, 2}, 2), ContractViolation);
}

TEST(TransitionTable, ShapeAndNormalization) {
    for (bool reduced : {false, true}) {
        const auto table = TransitionTable::build(make_space(5, 11, reduced), regime_actions(0.1, 1.0, 5));
        EXPECT_EQ(table.num_rows(), table.num_states() * table.num_actions());
        for (std::size_t s = 0; s < table.num_states(); ++s) {
            for (std::size_t a = 0; a < table.num_actions(); ++a) {
                double sum = 0.0;
                for (const Branch& b : table.row(s, a)) {
                    EXPECT_GT(b.probability, 0.0);
                    sum += b.probability;
                }
                EXPECT_NEAR(sum, 1.0, 1e-12);
            }
        }
    }
}

TEST(TransitionTable, SuccessFromFullSingletonIsAbsorbing) {
    const auto space = make_space(2, 3, false);
    const ActionSpace actions = ActionSpace::synthetic({{0.6, 0.0, 1}, {0.3, 0.0, 3}});
    const auto table = TransitionTable::build(space, actions);
    const auto row = table.row(space->index_of(st({3})), 0);
    ASSERT_EQ(row.size(), 2u);
    EXPECT_TRUE(row[0].terminal());
    EXPECT_DOUBLE_EQ(row[0].probability, 0.6);
    EXPECT_EQ(space->state(static_cast<std::size_t>(row[1].next)), st({2}));
}

TEST(TransitionTable, NoZeroTtlAndBoundedByTmax) {
    const ActionSpace actions = regime_actions(0.19, 2.0, 4);
    const auto space = make_space(4, 6, false);
    for (const State& s : space->states()) {
        for (const Action& a : actions) {
            for (const auto& e : successors(s, a, 4)) {
                for (int t : e.next) {
                    EXPECT_GE(t, 1);
                    EXPECT_LE(t, 6);
                }
            }
        }
    }
}

TEST(TransitionTable, ReductionCommutesWithTransitions) {
    for (auto [gamma, lambda, t_max] : {std::tuple{0.19, 2.0, 6}, std::tuple{0.1, 1.0, 11}}) {
        for (int n = 2; n <= 5; ++n) {
            const ActionSpace actions = regime_actions(gamma, lambda, n);
            const auto full = make_space(n, t_max, false);
            const auto reduced = make_space(n, t_max, true);
            const auto reduced_table = TransitionTable::build(reduced, actions);
            for (const State& s : full->states()) {
                const std::size_t rs = reduced->representative(s);
                for (std::size_t a = 0; a < actions.size(); ++a) {
                    std::map<std::int32_t, double> image;
                    for (const auto& e : successors(s, actions[a], n)) {
                        const std::int32_t id = is_absorbing(e.next, n)
                                                    ? Branch::kAbsorbing
                                                    : static_cast<std::int32_t>(reduced->representative(e.next));
                        image[id] += e.probability;
                    }
                    std::map<std::int32_t, double> direct;
                    for (const Branch& b : reduced_table.row(rs, a)) direct[b.next] += b.probability;
                    ASSERT_EQ(image.size(), direct.size()) << s.key();
                    for (const auto& [id, p] : image) EXPECT_NEAR(direct.at(id), p, 1e-15);
                }
            }
        }
    }
}

TEST(TransitionTable, Deterministic) {
    const ActionSpace actions = regime_actions(0.1, 1.0, 4);
    const auto space = make_space(4, 11, false);
    const auto t1 = TransitionTable::build(space, actions);
    const auto t2 = TransitionTable::build(space, actions);
    for (std::size_t s = 0; s < t1.num_states(); ++s) {
        for (std::size_t a = 0; a < t1.num_actions(); ++a) {
            const auto r1 = t1.row(s, a);
            const auto r2 = t2.row(s, a);
            ASSERT_EQ(r1.size(), r2.size());
            for (std::size_t k = 0; k < r1.size(); ++k) {
                EXPECT_EQ(r1[k].next, r2[k].next);
                EXPECT_EQ(r1[k].probability, r2[k].probability);
            }
        }
    }
}
