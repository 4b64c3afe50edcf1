#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entpack/model.hpp"

namespace entpack {

/// Multiset of link TTLs, stored in non-increasing order. Empty means no links.
class State {
public:
    State() = default;

    /// Sorts `ttls` into canonical order; throws DomainError on entries outside [1, t_max].
    static State canonical(std::vector<int> ttls, int t_max);
    /// Adopts an already non-increasing sequence of positive TTLs.
    static State from_sorted(std::vector<int> ttls);
    /// Parses the persistence key ("5,3", "" for the empty state).
    static State from_key(std::string_view key);

    std::size_t size() const noexcept { return ttls_.size(); }
    bool empty() const noexcept { return ttls_.empty(); }
    int operator[](std::size_t i) const { return ttls_[i]; }
    std::span<const int> ttls() const noexcept { return ttls_; }
    auto begin() const noexcept { return ttls_.begin(); }
    auto end() const noexcept { return ttls_.end(); }

    /// Comma-joined descending TTLs.
    std::string key() const;

    friend bool operator==(const State&, const State&) = default;
    friend auto operator<=>(const State&, const State&) = default;

private:
    explicit State(std::vector<int> ttls) : ttls_(std::move(ttls)) {}
    std::vector<int> ttls_;
};

State canonicalize(std::vector<int> ttls, int t_max);

/// Number of viable links: the largest j with t_j > n - j (1-based), or 0.
int viable_count(std::span<const int> descending_ttls, int n);
inline int viable_count(const State& s, int n) { return viable_count(s.ttls(), n); }

/// The viable prefix of `s`.
State viable_projection(const State& s, int n);

inline bool is_absorbing(const State& s, int n) { return static_cast<int>(s.size()) == n; }

using Count = std::uint64_t;

/// Exact binomial coefficient; throws OverflowError when it exceeds 64 bits.
Count binomial(std::uint64_t n, std::uint64_t k);

/// |S| = C(t_max + n - 1, n - 1), the number of non-absorbing states.
Count count_states(int n, int t_max);
/// Size of the viable-reduced space, 1 + sum_{m=1}^{n-1} C(t_max + 2m - n - 1, m).
Count count_reduced(int n, int t_max);
/// (1 + t_max / (n - 1))^(n - 1), a lower bound on count_states.
double state_count_lower_bound(int n, int t_max);

/// Perfect ranking of states into the enumeration order of StateSpace.
///
/// Order: by number of links, then lexicographically ascending on the
/// non-increasing TTL tuple. The reduced space ranks only states whose links
/// are all viable; a state of size m then has TTLs in [n - m + 1, t_max].
class StateIndexer {
public:
    StateIndexer() = default;
    StateIndexer(int n, int t_max, bool reduced);

    int n() const noexcept { return n_; }
    int t_max() const noexcept { return t_max_; }
    bool reduced() const noexcept { return reduced_; }
    std::size_t size() const noexcept { return size_; }

    /// Rank of a canonical state that belongs to this space. No range checks.
    std::size_t rank(std::span<const int> descending_ttls) const noexcept;
    /// Checked variant: nullopt if the state is not a member.
    std::optional<std::size_t> find(std::span<const int> descending_ttls) const noexcept;
    bool contains(std::span<const int> descending_ttls) const noexcept;

private:
    Count choose(int a, int b) const noexcept;

    int n_ = 0;
    int t_max_ = 0;
    bool reduced_ = false;
    std::size_t size_ = 0;
    int table_dim_ = 0;
    std::vector<Count> binom_;       // (table_dim_ x table_dim_) Pascal triangle
    std::vector<std::size_t> offset_;  // first rank of each state size
};

/// Indexed enumeration of the non-absorbing states for (n, t_max).
class StateSpace {
public:
    /// Throws InfeasibleError if n > t_max and DomainError if n < 2.
    static StateSpace enumerate(int n, int t_max, bool reduced);
    static StateSpace enumerate(const ModelParams& params, int t_max, bool reduced);

    int n() const noexcept { return indexer_.n(); }
    int t_max() const noexcept { return indexer_.t_max(); }
    bool reduced() const noexcept { return indexer_.reduced(); }
    std::size_t size() const noexcept { return states_.size(); }

    const State& state(std::size_t id) const { return states_.at(id); }
    const std::vector<State>& states() const noexcept { return states_; }
    const StateIndexer& indexer() const noexcept { return indexer_; }

    /// Id of a member state; throws ContractViolation otherwise.
    std::size_t index_of(const State& s) const;
    std::optional<std::size_t> find(const State& s) const noexcept;

    /// Id of the state that represents `s` in this space: `s` itself on the
    /// full space, its viable projection on the reduced one.
    std::size_t representative(const State& s) const;

private:
    StateSpace(StateIndexer indexer, std::vector<State> states)
        : indexer_(std::move(indexer)), states_(std::move(states)) {}

    StateIndexer indexer_;
    std::vector<State> states_;
};

}  // namespace entpack
