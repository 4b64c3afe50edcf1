#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "entpack/transitions.hpp"

namespace entpack {

/// Map from non-absorbing state ids to actions, either one action per state
/// or a probability vector over actions per state.
class Policy {
public:
    enum class Kind { deterministic, stochastic };

    Policy() = default;

    static Policy deterministic(std::vector<std::int32_t> actions, std::size_t num_actions);
    /// `probabilities` is row-major, one row of `num_actions` entries per state;
    /// each row must sum to 1 within 1e-12.
    static Policy stochastic(std::vector<double> probabilities, std::size_t num_actions);

    Kind kind() const noexcept { return kind_; }
    bool is_deterministic() const noexcept { return kind_ == Kind::deterministic; }
    std::size_t size() const noexcept { return size_; }
    std::size_t num_actions() const noexcept { return num_actions_; }

    /// Deterministic policies only.
    std::int32_t action(std::size_t state) const;
    const std::vector<std::int32_t>& actions() const noexcept { return actions_; }
    /// Stochastic policies only.
    std::span<const double> distribution(std::size_t state) const;
    /// pi(a | s) for either kind.
    double probability(std::size_t state, std::size_t action) const;

    friend bool operator==(const Policy&, const Policy&) = default;

private:
    Kind kind_ = Kind::deterministic;
    std::size_t size_ = 0;
    std::size_t num_actions_ = 0;
    std::vector<std::int32_t> actions_;
    std::vector<double> probabilities_;
};

enum class EvalMethod { automatic, jacobi, gauss_seidel, direct };

struct EvalOptions {
    /// Tolerance on updates and residuals, relative to max(1, max_s w(s)).
    double tol = 1e-10;
    std::int64_t max_iters = 10'000'000;
    EvalMethod method = EvalMethod::automatic;
    /// `automatic` factorizes directly up to this many states, then iterates.
    std::size_t direct_limit = 2'000'000;
    int workers = 0;
};

/// Expected completion times w(s) = E[T | S_0 = s] over the non-absorbing
/// states of a space; absorbing states have w = 0 implicitly.
struct ValueTable {
    std::vector<double> w;
    double residual = 0.0;         ///< relative sup-norm Bellman residual
    std::int64_t iterations = 0;   ///< sweeps, or refinement steps for direct solves
    EvalMethod method = EvalMethod::automatic;

    double operator[](std::size_t state) const { return w[state]; }
    /// w of the empty state (id 0 in every space).
    double empty_state() const { return w.at(0); }
};

/// Sum over branches of P(s' | s, a) w(s'), with w = 0 on absorbing successors.
double expected_next_value(const TransitionTable& table, std::size_t state, std::size_t action,
                           std::span<const double> w) noexcept;

/// Relative sup-norm residual max_s |1 + sum_a pi(a|s) E[w(s') | s, a] - w(s)| / max(1, |w|_inf).
double policy_residual(const Policy& policy, const TransitionTable& table, std::span<const double> w);

/// States from which the policy reaches absorption with positive probability.
std::vector<bool> completing_states(const Policy& policy, const TransitionTable& table);

/// Solves the Bellman equation w = 1 + P_pi w.
///
/// Throws NonConvergenceError if some state can never complete under the
/// policy, or if an iterative method exhausts max_iters above tolerance.
ValueTable evaluate_policy(const Policy& policy, const TransitionTable& table, const EvalOptions& options = {});

struct PolicyIterationResult {
    Policy policy;
    ValueTable values;
    int iterations = 0;
    /// w(empty) after each evaluation.
    std::vector<double> empty_state_history;
    /// Per improvement round: max_s (w_k(s) - w_{k-1}(s)) / max(1, |w_{k-1}|_inf).
    std::vector<double> max_relative_increase;
};

/// Constant policy using the highest-probability action whose TTL is at
/// least n. It completes from every state, so its evaluation is finite.
Policy default_initial_policy(const TransitionTable& table);

/// Alternates exact evaluation and greedy improvement until the policy is stable.
///
/// A state keeps its action unless another improves it by more than
/// tol * max(1, |w|_inf); a changed state takes the lowest-id action among
/// those within that margin of the minimum.
PolicyIterationResult policy_iteration(const TransitionTable& table, const EvalOptions& options = {},
                                       std::optional<Policy> initial = std::nullopt, int max_rounds = 1000);

/// Relative one-step residual of the optimality equation,
/// max_s |w(s) - (1 + min_a E[w(s') | s, a])| / max(1, |w|_inf).
double optimality_certificate(std::span<const double> w, const TransitionTable& table);
inline double optimality_certificate(const ValueTable& values, const TransitionTable& table) {
    return optimality_certificate(values.w, table);
}

}  // namespace entpack
