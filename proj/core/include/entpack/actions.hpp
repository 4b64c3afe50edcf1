#pragma once

#include <cstddef>
#include <vector>

#include "entpack/model.hpp"

namespace entpack {

/// Generation parameters: success probability, fresh-link fidelity, and the TTL it induces.
struct Action {
    double p = 0.0;
    double f = 1.0;
    int ttl = 1;

    friend bool operator==(const Action&, const Action&) = default;
};

enum class Provenance { synthetic, single_click };

/// Finite action set sorted by increasing TTL (and so decreasing p).
class ActionSpace {
public:
    ActionSpace() = default;

    /// Accepts caller-supplied actions after checking ordering.
    ///
    /// TTLs must be strictly increasing and p non-increasing along the list;
    /// equal probabilities are tolerated here so that tie-breaking can be tested.
    static ActionSpace synthetic(std::vector<Action> actions, double lambda = 0.0);

    std::size_t size() const noexcept { return actions_.size(); }
    bool empty() const noexcept { return actions_.empty(); }
    const Action& operator[](std::size_t i) const { return actions_[i]; }
    const Action& at(std::size_t i) const { return actions_.at(i); }
    const std::vector<Action>& actions() const noexcept { return actions_; }
    auto begin() const noexcept { return actions_.begin(); }
    auto end() const noexcept { return actions_.end(); }

    int t_min() const noexcept { return actions_.empty() ? 0 : actions_.front().ttl; }
    int t_max() const noexcept { return actions_.empty() ? 0 : actions_.back().ttl; }
    double lambda() const noexcept { return lambda_; }
    Provenance provenance() const noexcept { return provenance_; }

    /// Highest-probability action; among equal p the larger TTL wins.
    std::size_t max_probability_action() const;

    /// Highest-probability action with ttl >= min_ttl (larger TTL on ties).
    /// Returns size() when no action qualifies.
    std::size_t best_action_with_ttl_at_least(int min_ttl) const noexcept;

private:
    friend ActionSpace build_action_space(const ModelParams& params);

    std::vector<Action> actions_;
    double lambda_ = 0.0;
    Provenance provenance_ = Provenance::synthetic;
};

/// Approximate batched single-click relation F = lambda ln(1 - p) + 1, for p in [0, 1).
double singleclick_fidelity(double p, double lambda);
/// Same relation, rejecting probabilities whose fidelity does not exceed f_app.
double singleclick_fidelity(double p, double lambda, double f_app);
/// Inverse of the approximate relation: p = 1 - exp((F - 1) / lambda).
double singleclick_probability(double f, double lambda);

/// Exact success probability of M batched single-click executions,
/// 1 - (1 - (1 - F) / (lambda M))^M.
double exact_batched_probability(double f, double lambda, int m_batch);

/// Upper bound 1 - (1 - 1/y)^r on exact - approximate probability,
/// with r = (1 - F) / lambda and y = M / r.
double approximation_error_bound(double f, double lambda, int m_batch);

/// Supremum of usable success probabilities, 1 - exp((f_app - 1) / lambda).
double max_success_probability(double lambda, double f_app);

/// One action per TTL in [t_min, t_max], each with the largest probability that
/// still yields that TTL under the approximate single-click relation.
ActionSpace build_action_space(const ModelParams& params);

}  // namespace entpack
