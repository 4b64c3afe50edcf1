#include "entpack/transitions.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "entpack/error.hpp"

namespace entpack {

void age_links(std::vector<int>& ttls) {
    for (int& t : ttls) --t;
    while (!ttls.empty() && ttls.back() <= 0) ttls.pop_back();
}

void insert_link(std::vector<int>& ttls, int ttl) {
    ttls.insert(std::upper_bound(ttls.begin(), ttls.end(), ttl, std::greater<>{}), ttl);
}

std::vector<TransitionEntry> successors(const State& s, const Action& a, int n) {
    if (static_cast<int>(s.size()) >= n) {
        throw ContractViolation("successors() called on absorbing state {" + s.key() + "}");
    }
    if (a.ttl < 1) throw ContractViolation("action TTL must be positive");

    std::vector<int> aged(s.begin(), s.end());
    age_links(aged);
    std::vector<int> grown = aged;
    insert_link(grown, a.ttl);

    State fail = State::from_sorted(std::move(aged));
    State succ = State::from_sorted(std::move(grown));
    if (a.p >= 1.0) return {{std::move(succ), 1.0}};
    if (a.p <= 0.0) return {{std::move(fail), 1.0}};
    return {{std::move(succ), a.p}, {std::move(fail), 1.0 - a.p}};
}

TransitionTable TransitionTable::build(std::shared_ptr<const StateSpace> space, ActionSpace actions) {
    if (!space) throw ContractViolation("null state space");
    if (actions.empty()) throw ContractViolation("empty action space");
    if (actions.t_max() > space->t_max()) {
        throw ContractViolation("action TTL " + std::to_string(actions.t_max()) +
                                " exceeds the space's t_max " + std::to_string(space->t_max()));
    }
    if (space->size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
        throw OverflowError("state space too large for 32-bit ids");
    }

    TransitionTable table;
    table.space_ = std::move(space);
    table.actions_ = std::move(actions);
    const StateSpace& sp = *table.space_;
    const int n = sp.n();
    const std::size_t rows = sp.size() * table.actions_.size();
    table.branches_.assign(2 * rows, Branch{});
    table.counts_.assign(rows, 0);

    auto resolve = [&](const std::vector<int>& ttls) -> std::int32_t {
        if (static_cast<int>(ttls.size()) == n) return Branch::kAbsorbing;
        std::span<const int> key(ttls);
        if (sp.reduced()) key = key.first(static_cast<std::size_t>(viable_count(key, n)));
        const auto id = sp.indexer().find(key);
        if (!id) throw ContractViolation("successor outside the state space; enumeration bug");
        return static_cast<std::int32_t>(*id);
    };

    std::vector<int> aged;
    std::vector<int> grown;
    for (std::size_t s = 0; s < sp.size(); ++s) {
        const State& state = sp.state(s);
        aged.assign(state.begin(), state.end());
        age_links(aged);
        const std::int32_t fail = resolve(aged);
        for (std::size_t a = 0; a < table.actions_.size(); ++a) {
            const Action& action = table.actions_[a];
            grown = aged;
            insert_link(grown, action.ttl);
            const std::int32_t succ = resolve(grown);

            const std::size_t r = s * table.actions_.size() + a;
            Branch* slot = &table.branches_[2 * r];
            if (succ == fail || action.p >= 1.0 || action.p <= 0.0) {
                slot[0] = Branch{action.p <= 0.0 ? fail : succ, 1.0};
                if (succ == fail) slot[0].next = succ;
                table.counts_[r] = 1;
            } else {
                slot[0] = Branch{succ, action.p};
                slot[1] = Branch{fail, 1.0 - action.p};
                table.counts_[r] = 2;
            }
        }
    }
    return table;
}

}  // namespace entpack
