#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "entpack/actions.hpp"
#include "entpack/statespace.hpp"

namespace entpack {

struct TransitionEntry {
    State next;
    double probability = 0.0;

    friend bool operator==(const TransitionEntry&, const TransitionEntry&) = default;
};

/// One step from a non-absorbing state: all links age, expired ones drop,
/// and on success a fresh link with the action's TTL joins.
///
/// The success branch comes first. Coinciding branches, and the degenerate
/// p = 0 / p = 1 cases, collapse into a single entry.
std::vector<TransitionEntry> successors(const State& s, const Action& a, int n);

/// Ages every link by one step and drops expired links, in place.
/// `ttls` is non-increasing; so is the result.
void age_links(std::vector<int>& ttls);
/// Inserts a TTL keeping the sequence non-increasing.
void insert_link(std::vector<int>& ttls, int ttl);

/// Successor resolved to a state id of the table's space.
struct Branch {
    static constexpr std::int32_t kAbsorbing = -1;

    std::int32_t next = kAbsorbing;
    double probability = 0.0;

    bool terminal() const noexcept { return next == kAbsorbing; }
};

/// Materialized P(s' | s, a) for every (state, action) of a space.
class TransitionTable {
public:
    /// Throws ContractViolation if a successor falls outside the space or the
    /// actions produce TTLs beyond the space's t_max.
    static TransitionTable build(std::shared_ptr<const StateSpace> space, ActionSpace actions);

    const StateSpace& space() const noexcept { return *space_; }
    std::shared_ptr<const StateSpace> space_ptr() const noexcept { return space_; }
    const ActionSpace& actions() const noexcept { return actions_; }
    std::size_t num_states() const noexcept { return space_->size(); }
    std::size_t num_actions() const noexcept { return actions_.size(); }
    std::size_t num_rows() const noexcept { return counts_.size(); }

    std::span<const Branch> row(std::size_t state, std::size_t action) const noexcept {
        const std::size_t r = state * actions_.size() + action;
        return {branches_.data() + 2 * r, counts_[r]};
    }

private:
    std::shared_ptr<const StateSpace> space_;
    ActionSpace actions_;
    std::vector<Branch> branches_;       // two slots per row
    std::vector<std::uint8_t> counts_;   // used slots per row
};

}  // namespace entpack
