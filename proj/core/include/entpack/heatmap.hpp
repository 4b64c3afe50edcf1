#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "entpack/dp.hpp"
#include "entpack/transitions.hpp"

namespace entpack {

enum class HeatmapAggregation { reduced, full };

const char* to_string(HeatmapAggregation aggregation) noexcept;
HeatmapAggregation parse_heatmap_aggregation(const std::string& text);

/// One cell of the policy map: states grouped by their viable-link count and
/// the smallest viable TTL (0 for the cell without viable links).
struct HeatmapCell {
    int n_viable = 0;
    int min_viable_ttl = 0;
    /// TTL of the most frequent action in the cell, larger TTL on ties; 0 when the cell is empty.
    int modal_action_ttl = 0;
    std::size_t state_count = 0;
    /// Some state in the cell is reachable from the empty state under some sequence of actions.
    bool accessible = false;

    friend bool operator==(const HeatmapCell&, const HeatmapCell&) = default;
};

/// States reachable from the empty state when every action is allowed.
std::vector<bool> reachable_states(const TransitionTable& table);

/// Aggregates a deterministic policy over the cell grid n_viable in [0, n-1],
/// min_viable_ttl in [n - n_viable + 1, t_max] (a single cell at 0 for no viable links).
///
/// With `reduced`, only states equal to their viable projection are counted;
/// with `full`, every state contributes through its projection.
/// Throws ContractViolation for stochastic policies.
std::vector<HeatmapCell> build_heatmap(const Policy& policy, const TransitionTable& table,
                                       HeatmapAggregation aggregation = HeatmapAggregation::reduced);

inline constexpr const char* kHeatmapHeader = "n_viable,min_viable_ttl,modal_action_ttl,state_count,accessible";

std::string heatmap_to_csv(const std::vector<HeatmapCell>& cells);

}  // namespace entpack
