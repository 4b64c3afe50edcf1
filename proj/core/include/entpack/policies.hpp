#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entpack/dp.hpp"
#include "entpack/montecarlo.hpp"

namespace entpack {

/// Action the heuristic takes in a state, given the action for zero-viable states.
///
/// Zero viable links: `empty_action`. n - 1 viable links: the max-probability
/// action. Otherwise the highest-probability action whose TTL is at least the
/// smallest viable TTL minus one. Only the viable prefix is consulted.
std::size_t heuristic_action(std::span<const int> descending_ttls, int n, const ActionSpace& actions,
                             std::size_t empty_action);

/// The heuristic as a table over a (full or reduced) space.
Policy heuristic_policy(const StateSpace& space, const ActionSpace& actions, std::size_t empty_action);

enum class SelectionMethod { exact, simulation };

struct HeuristicOptions {
    /// Fix the zero-viable action instead of searching for it.
    std::optional<std::size_t> empty_action;
    /// Above this many states the search uses simulation instead of exact evaluation.
    std::size_t exact_state_threshold = 1'000'000;
    std::optional<SelectionMethod> force_method;
    std::int64_t simulation_episodes = 1'000'000;
    std::uint64_t seed = 1;
    EvalOptions eval;
    SimOptions sim;
};

struct CandidateScore {
    std::size_t action = 0;
    std::optional<double> expected_time;  ///< empty when the candidate never completes
    std::optional<double> std_error;      ///< simulation only
    std::string error;
};

struct HeuristicResult {
    Policy policy;
    std::size_t empty_action = 0;
    SelectionMethod method = SelectionMethod::exact;
    std::vector<CandidateScore> candidates;
    /// Exact value table when method == exact.
    std::optional<ValueTable> values;
};

/// Builds the heuristic, choosing the zero-viable action that minimizes w(empty).
HeuristicResult select_heuristic(const TransitionTable& table, const HeuristicOptions& options = {});

Policy constant_policy(std::size_t num_states, std::size_t action, std::size_t num_actions);

struct BestConstant {
    std::size_t action = 0;
    ValueTable values;
    std::vector<CandidateScore> candidates;
};

/// Evaluates every constant policy exactly and returns the fastest.
/// Candidates that never complete are reported and skipped; fails only if all do.
BestConstant best_constant(const TransitionTable& table, const EvalOptions& eval = {});

/// Uniform distribution over all actions in every state.
Policy random_policy(std::size_t num_states, std::size_t num_actions);

/// Closed-form optimum for n = 2.
struct AnalyticN2 {
    Policy policy;
    std::size_t empty_action = 0;
    std::size_t max_p_action = 0;
    double expected_time = 0.0;
    /// Another candidate attained the same minimum; the lowest id was kept.
    bool tie = false;
};

/// 1/p_max + 1 / (p_empty (1 - (1 - p_max)^(ttl_empty - 1))); +inf when the bracket vanishes.
double analytic_n2_expected_time(double p_empty, int ttl_empty, double p_max);

/// Throws DomainError unless the space has n = 2.
AnalyticN2 analytic_n2(const StateSpace& space, const ActionSpace& actions);

}  // namespace entpack
