#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "entpack/error.hpp"
#include "entpack/statespace.hpp"

using namespace entpack;

namespace {

State st(std::vector<int> v) { return State::from_sorted(std::move(v)); }

// Brute-force viable count straight from the definition.
int viable_by_definition(const State& s, int n) {
    int k = 0;
    for (std::size_t j = 1; j <= s.size(); ++j) {
        if (s[j - 1] > n - static_cast<int>(j)) k = static_cast<int>(j);
    }
    return k;
}

}  // namespace

TEST(Canonicalize, SortsDescending) {
    EXPECT_EQ(canonicalize({2, 4, 4}, 6), st({4, 4, 2}));
    EXPECT_TRUE(canonicalize({}, 6).empty());
    EXPECT_EQ(canonicalize({3}, 6), st({3}));
    const State once = canonicalize({1, 5, 3}, 6);
    EXPECT_EQ(canonicalize({once.begin(), once.end()}, 6), once);
}

TEST(Canonicalize, RejectsOutOfRange) {
    EXPECT_THROW(canonicalize({0, 2}, 6), DomainError);
    EXPECT_THROW(canonicalize({7}, 6), DomainError);
}

TEST(StateKey, RoundTrips) {
    EXPECT_EQ(st({5, 3}).key(), "5,3");
    EXPECT_EQ(State{}.key(), "");
    EXPECT_EQ(State::from_key("5,3"), st({5, 3}));
    EXPECT_TRUE(State::from_key("").empty());
}

TEST(ViableCount, Examples) {
    EXPECT_EQ(viable_count(State{}, 2), 0);
    EXPECT_EQ(viable_count(State{}, 7), 0);
    EXPECT_EQ(viable_count(st({1}), 2), 0);
    EXPECT_EQ(viable_count(st({5, 3}), 4), 2);
    EXPECT_EQ(viable_count(st({3, 2}), 4), 0);
}

TEST(ViableProjection, Examples) {
    EXPECT_EQ(viable_projection(st({5, 3}), 4), st({5, 3}));
    EXPECT_TRUE(viable_projection(st({3, 2}), 4).empty());
    EXPECT_TRUE(viable_projection(State{}, 4).empty());
}

TEST(ViableProjection, MatchesDefinitionAndIsIdempotent) {
    for (int n = 2; n <= 5; ++n) {
        const StateSpace full = StateSpace::enumerate(n, 6, false);
        for (const State& s : full.states()) {
            ASSERT_EQ(viable_count(s, n), viable_by_definition(s, n));
            const State v = viable_projection(s, n);
            EXPECT_EQ(viable_projection(v, n), v);
        }
    }
}

TEST(ViableProjection, ImageIsReducedSpace) {
    for (int n = 2; n <= 5; ++n) {
        for (int t_max = n; t_max <= 8; ++t_max) {
            const StateSpace full = StateSpace::enumerate(n, t_max, false);
            const StateSpace reduced = StateSpace::enumerate(n, t_max, true);
            std::set<State> image;
            for (const State& s : full.states()) image.insert(viable_projection(s, n));
            const std::set<State> listed(reduced.states().begin(), reduced.states().end());
            EXPECT_EQ(image, listed) << "n=" << n << " t_max=" << t_max;
        }
    }
}

TEST(IsAbsorbing, Examples) {
    EXPECT_TRUE(is_absorbing(st({4, 3, 2, 1}), 4));
    EXPECT_FALSE(is_absorbing(State{}, 2));
    EXPECT_FALSE(is_absorbing(st({6}), 2));
}

TEST(Enumerate, SmallFullSpaceInOrder) {
    const StateSpace s = StateSpace::enumerate(2, 3, false);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_TRUE(s.state(0).empty());
    EXPECT_EQ(s.state(1), st({1}));
    EXPECT_EQ(s.state(2), st({2}));
    EXPECT_EQ(s.state(3), st({3}));
}

TEST(Enumerate, GradedLexicographicOrderAndIndexBijection) {
    for (bool reduced : {false, true}) {
        const StateSpace s = StateSpace::enumerate(5, 7, reduced);
        for (std::size_t i = 0; i < s.size(); ++i) {
            EXPECT_EQ(s.index_of(s.state(i)), i);
            if (i > 0) {
                const State& a = s.state(i - 1);
                const State& b = s.state(i);
                const bool ordered = a.size() < b.size() ||
                                     (a.size() == b.size() &&
                                      std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
                EXPECT_TRUE(ordered) << a.key() << " before " << b.key();
            }
        }
    }
}

TEST(Enumerate, KnownSizes) {
    EXPECT_EQ(StateSpace::enumerate(5, 6, false).size(), 210u);
    EXPECT_EQ(StateSpace::enumerate(5, 6, true).size(), 99u);
    EXPECT_EQ(StateSpace::enumerate(7, 11, false).size(), 12376u);
    const StateSpace r = StateSpace::enumerate(2, 3, true);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r.state(1), st({2}));
    EXPECT_EQ(r.state(2), st({3}));
}

TEST(Enumerate, RejectsInfeasible) { EXPECT_THROW(StateSpace::enumerate(7, 6, false), InfeasibleError); }

TEST(StateSpace, RepresentativeMapsThroughProjection) {
    const StateSpace r = StateSpace::enumerate(4, 6, true);
    EXPECT_EQ(r.representative(st({3, 2})), 0u);
    EXPECT_EQ(r.state(r.representative(st({6, 5, 1}))), st({6, 5}));
    EXPECT_FALSE(r.find(st({3, 2})).has_value());
}

TEST(Counting, Examples) {
    EXPECT_EQ(count_states(5, 6), 210u);
    EXPECT_EQ(count_states(2, 3), 4u);
    EXPECT_EQ(count_states(7, 11), 12376u);
    EXPECT_EQ(count_reduced(5, 6), 99u);
    EXPECT_EQ(count_reduced(2, 3), 3u);
    EXPECT_EQ(count_reduced(2, 2), 2u);
}

TEST(Counting, EnumerationMatchesClosedFormsOnGrid) {
    for (int t_max = 2; t_max <= 11; ++t_max) {
        for (int n = 2; n <= t_max; ++n) {
            EXPECT_EQ(StateSpace::enumerate(n, t_max, false).size(), count_states(n, t_max));
            EXPECT_EQ(StateSpace::enumerate(n, t_max, true).size(), count_reduced(n, t_max));
        }
    }
}

TEST(Counting, HockeyStickAndLowerBound) {
    for (int t_max = 2; t_max <= 11; ++t_max) {
        for (int n = 2; n <= t_max; ++n) {
            Count sum = 0;
            for (int m = 0; m < n; ++m) sum += binomial(static_cast<std::uint64_t>(t_max - 1 + m), m);
            EXPECT_EQ(sum, binomial(static_cast<std::uint64_t>(t_max + n - 1), n - 1));
            EXPECT_LE(state_count_lower_bound(n, t_max), static_cast<double>(count_states(n, t_max)));
            EXPECT_GE(count_states(n, t_max), Count{1} << (n - 1));
        }
    }
}

TEST(Counting, LowerBoundExamples) {
    EXPECT_DOUBLE_EQ(state_count_lower_bound(5, 6), 39.0625);
    EXPECT_DOUBLE_EQ(state_count_lower_bound(2, 6), 7.0);
    EXPECT_EQ(count_states(2, 6), 7u);
    EXPECT_NEAR(state_count_lower_bound(6, 6), std::pow(2.2, 5), 1e-9);
    EXPECT_EQ(count_states(6, 6), 462u);
    EXPECT_THROW(state_count_lower_bound(1, 6), DomainError);
}

TEST(Counting, OverflowIsReported) {
    EXPECT_THROW(count_states(40, 200), OverflowError);
    EXPECT_THROW(binomial(200, 100), OverflowError);
}

TEST(StateIndexer, RankIsDenseBijection) {
    for (bool reduced : {false, true}) {
        const StateSpace s = StateSpace::enumerate(4, 9, reduced);
        for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.indexer().rank(s.state(i).ttls()), i);
    }
}
