#include "entpack/policies.hpp"

#include <cmath>
#include <limits>

#include "entpack/error.hpp"

namespace entpack {

std::size_t heuristic_action(std::span<const int> ttls, int n, const ActionSpace& actions, std::size_t empty_action) {
    const int viable = viable_count(ttls, n);
    if (viable == 0) return empty_action;
    if (viable == n - 1) return actions.max_probability_action();
    const int smallest_viable = ttls[static_cast<std::size_t>(viable) - 1];
    const std::size_t a = actions.best_action_with_ttl_at_least(smallest_viable - 1);
    // Any stored TTL is at most t_max, so the largest-TTL action always qualifies.
    return a == actions.size() ? actions.size() - 1 : a;
}

Policy heuristic_policy(const StateSpace& space, const ActionSpace& actions, std::size_t empty_action) {
    if (empty_action >= actions.size()) throw ContractViolation("empty action out of range");
    std::vector<std::int32_t> table(space.size());
    for (std::size_t s = 0; s < space.size(); ++s) {
        table[s] = static_cast<std::int32_t>(heuristic_action(space.state(s).ttls(), space.n(), actions, empty_action));
    }
    return Policy::deterministic(std::move(table), actions.size());
}

HeuristicResult select_heuristic(const TransitionTable& table, const HeuristicOptions& options) {
    const StateSpace& space = table.space();
    const ActionSpace& actions = table.actions();
    const int n = space.n();

    HeuristicResult result;
    result.method = options.force_method.value_or(
        space.size() > options.exact_state_threshold ? SelectionMethod::simulation : SelectionMethod::exact);

    std::vector<std::size_t> candidates;
    if (options.empty_action) {
        if (*options.empty_action >= actions.size()) throw ContractViolation("empty action out of range");
        candidates.push_back(*options.empty_action);
    } else {
        for (std::size_t a = 0; a < actions.size(); ++a) candidates.push_back(a);
    }

    double best = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> best_action;
    for (std::size_t a : candidates) {
        CandidateScore score;
        score.action = a;
        if (result.method == SelectionMethod::exact) {
            try {
                ValueTable values = evaluate_policy(heuristic_policy(space, actions, a), table, options.eval);
                score.expected_time = values.empty_state();
                if (values.empty_state() < best) {
                    best = values.empty_state();
                    best_action = a;
                    result.values = std::move(values);
                }
            } catch (const NonConvergenceError& e) {
                score.error = e.what();
            }
        } else if (actions[a].ttl < n) {
            // A fresh link with TTL < n is never viable, so the zero-viable
            // states repeat this action forever.
            score.error = "zero-viable action with ttl < n never completes";
        } else {
            try {
                const HeuristicRule rule(n, actions, a);
                const SimResult sim = estimate(rule, actions, n, options.simulation_episodes, options.seed, options.sim);
                score.expected_time = sim.mean;
                score.std_error = sim.std_error;
                if (sim.mean < best) {
                    best = sim.mean;
                    best_action = a;
                }
            } catch (const StepCapError& e) {
                score.error = e.what();
            }
        }
        result.candidates.push_back(std::move(score));
    }
    if (!best_action) {
        throw NonConvergenceError("no zero-viable action gives the heuristic a finite completion time",
                                  std::numeric_limits<double>::infinity(), 0);
    }
    result.empty_action = *best_action;
    result.policy = heuristic_policy(space, actions, *best_action);
    return result;
}

Policy constant_policy(std::size_t num_states, std::size_t action, std::size_t num_actions) {
    if (action >= num_actions) throw ContractViolation("constant action out of range");
    return Policy::deterministic(std::vector<std::int32_t>(num_states, static_cast<std::int32_t>(action)), num_actions);
}

BestConstant best_constant(const TransitionTable& table, const EvalOptions& eval) {
    BestConstant result;
    std::optional<ValueTable> best;
    for (std::size_t a = 0; a < table.num_actions(); ++a) {
        CandidateScore score;
        score.action = a;
        try {
            ValueTable values = evaluate_policy(constant_policy(table.num_states(), a, table.num_actions()), table, eval);
            score.expected_time = values.empty_state();
            if (!best || values.empty_state() < best->empty_state()) {
                result.action = a;
                best = std::move(values);
            }
        } catch (const NonConvergenceError& e) {
            score.error = e.what();
        }
        result.candidates.push_back(std::move(score));
    }
    if (!best) {
        throw NonConvergenceError("every constant-action policy failed to evaluate",
                                  std::numeric_limits<double>::infinity(), 0);
    }
    result.values = std::move(*best);
    return result;
}

Policy random_policy(std::size_t num_states, std::size_t num_actions) {
    if (num_actions == 0) throw ContractViolation("random policy needs at least one action");
    const double share = 1.0 / static_cast<double>(num_actions);
    std::vector<double> rows(num_states * num_actions, share);
    if (num_actions > 1) {
        // The leading entries sum to at least 1/2, so 1 - partial is exact and the
        // left-to-right row sum is exactly 1.
        double partial = 0.0;
        for (std::size_t a = 0; a + 1 < num_actions; ++a) partial += share;
        for (std::size_t s = 0; s < num_states; ++s) rows[s * num_actions + num_actions - 1] = 1.0 - partial;
    }
    return Policy::stochastic(std::move(rows), num_actions);
}

double analytic_n2_expected_time(double p_empty, int ttl_empty, double p_max) {
    const double bracket = -std::expm1((ttl_empty - 1) * std::log1p(-p_max));
    const double denominator = p_empty * bracket;
    if (!(denominator > 0.0)) return std::numeric_limits<double>::infinity();
    return 1.0 / p_max + 1.0 / denominator;
}

namespace {
constexpr double kTieTolerance = 1e-12;
}  // namespace

AnalyticN2 analytic_n2(const StateSpace& space, const ActionSpace& actions) {
    if (space.n() != 2) throw DomainError("analytic_n2 requires n = 2, got n = " + std::to_string(space.n()));
    AnalyticN2 out;
    out.max_p_action = actions.max_probability_action();
    const double p_max = actions[out.max_p_action].p;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < actions.size(); ++a) {
        const double t = analytic_n2_expected_time(actions[a].p, actions[a].ttl, p_max);
        if (!std::isfinite(t)) continue;
        if (!std::isfinite(best) || best - t > kTieTolerance * best) {
            best = t;
            out.empty_action = a;
            out.tie = false;
        } else if (std::abs(t - best) <= kTieTolerance * best) {
            out.tie = true;
        }
    }
    if (!std::isfinite(best)) {
        throw DomainError("every action has TTL 1 (or p = 0); E[T] is infinite for n = 2");
    }
    out.expected_time = best;

    std::vector<std::int32_t> table(space.size());
    for (std::size_t s = 0; s < space.size(); ++s) {
        const State& state = space.state(s);
        const bool zero_viable = state.empty() || state[0] == 1;
        table[s] = static_cast<std::int32_t>(zero_viable ? out.empty_action : out.max_p_action);
    }
    out.policy = Policy::deterministic(std::move(table), actions.size());
    return out;
}

}  // namespace entpack
