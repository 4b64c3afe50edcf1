#include "entpack/heatmap.hpp"

#include <deque>
#include <map>
#include <sstream>

#include "entpack/error.hpp"

namespace entpack {

const char* to_string(HeatmapAggregation aggregation) noexcept {
    return aggregation == HeatmapAggregation::reduced ? "reduced" : "full";
}

HeatmapAggregation parse_heatmap_aggregation(const std::string& text) {
    if (text == "reduced") return HeatmapAggregation::reduced;
    if (text == "full") return HeatmapAggregation::full;
    throw DomainError("unknown heat-map aggregation '" + text + "' (expected reduced or full)");
}

std::vector<bool> reachable_states(const TransitionTable& table) {
    std::vector<bool> seen(table.num_states(), false);
    if (table.num_states() == 0) return seen;
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        for (std::size_t a = 0; a < table.num_actions(); ++a) {
            for (const Branch& b : table.row(s, a)) {
                if (b.terminal() || b.probability <= 0.0) continue;
                const auto next = static_cast<std::size_t>(b.next);
                if (!seen[next]) {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    return seen;
}

std::vector<HeatmapCell> build_heatmap(const Policy& policy, const TransitionTable& table,
                                       HeatmapAggregation aggregation) {
    if (!policy.is_deterministic()) throw ContractViolation("heat maps need a deterministic policy");
    if (policy.size() != table.num_states()) throw ContractViolation("policy does not match the transition table");

    const StateSpace& space = table.space();
    const ActionSpace& actions = table.actions();
    const int n = space.n();
    const int t_max = space.t_max();

    struct Tally {
        std::map<int, std::size_t> by_ttl;
        std::size_t states = 0;
        bool accessible = false;
    };
    std::map<std::pair<int, int>, Tally> cells;
    cells[{0, 0}];
    for (int nv = 1; nv < n; ++nv) {
        for (int t = n - nv + 1; t <= t_max; ++t) cells[{nv, t}];
    }

    const std::vector<bool> reachable = reachable_states(table);
    for (std::size_t s = 0; s < space.size(); ++s) {
        const State& state = space.state(s);
        const int nv = viable_count(state, n);
        if (aggregation == HeatmapAggregation::reduced && nv != static_cast<int>(state.size())) continue;
        const int x = nv == 0 ? 0 : state[static_cast<std::size_t>(nv - 1)];
        Tally& tally = cells.at({nv, x});
        ++tally.states;
        ++tally.by_ttl[actions[static_cast<std::size_t>(policy.action(s))].ttl];
        tally.accessible = tally.accessible || reachable[s];
    }

    std::vector<HeatmapCell> out;
    out.reserve(cells.size());
    for (const auto& [key, tally] : cells) {
        HeatmapCell cell;
        cell.n_viable = key.first;
        cell.min_viable_ttl = key.second;
        cell.state_count = tally.states;
        cell.accessible = tally.accessible;
        std::size_t best = 0;
        for (const auto& [ttl, count] : tally.by_ttl) {
            if (count >= best) {
                best = count;
                cell.modal_action_ttl = ttl;
            }
        }
        out.push_back(cell);
    }
    return out;
}

std::string heatmap_to_csv(const std::vector<HeatmapCell>& cells) {
    std::ostringstream out;
    out << kHeatmapHeader << '\n';
    for (const HeatmapCell& c : cells) {
        out << c.n_viable << ',' << c.min_viable_ttl << ',' << c.modal_action_ttl << ',' << c.state_count << ','
            << (c.accessible ? "true" : "false") << '\n';
    }
    return out.str();
}

}  // namespace entpack
