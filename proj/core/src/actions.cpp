#include "entpack/actions.hpp"

#include <cmath>
#include <string>

#include "entpack/error.hpp"

namespace entpack {

ActionSpace ActionSpace::synthetic(std::vector<Action> actions, double lambda) {
    if (actions.empty()) throw DomainError("action space must not be empty");
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const Action& a = actions[i];
        if (!(a.p >= 0.0 && a.p <= 1.0)) throw DomainError("action probability outside [0, 1]");
        if (a.ttl < 1) throw DomainError("action TTL must be positive");
        if (i > 0) {
            const Action& prev = actions[i - 1];
            if (a.ttl <= prev.ttl) throw DomainError("action TTLs must be strictly increasing");
            if (a.p > prev.p) throw DomainError("action probabilities must not increase with TTL");
        }
    }
    ActionSpace space;
    space.actions_ = std::move(actions);
    space.lambda_ = lambda;
    space.provenance_ = Provenance::synthetic;
    return space;
}

std::size_t ActionSpace::max_probability_action() const {
    if (actions_.empty()) throw ContractViolation("empty action space");
    return best_action_with_ttl_at_least(0);
}

std::size_t ActionSpace::best_action_with_ttl_at_least(int min_ttl) const noexcept {
    std::size_t best = actions_.size();
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        if (actions_[i].ttl < min_ttl) continue;
        if (best == actions_.size() || actions_[i].p >= actions_[best].p) best = i;
    }
    return best;
}

double singleclick_fidelity(double p, double lambda) {
    if (!(p >= 0.0 && p < 1.0)) throw DomainError("probability must lie in [0, 1)");
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    return lambda * std::log1p(-p) + 1.0;
}

double singleclick_fidelity(double p, double lambda, double f_app) {
    const double f = singleclick_fidelity(p, lambda);
    if (!(p > 0.0) || !(f > f_app)) {
        throw DomainError("p = " + std::to_string(p) + " lies outside (0, " +
                          std::to_string(max_success_probability(lambda, f_app)) + ")");
    }
    return f;
}

double singleclick_probability(double f, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    if (!(f <= 1.0)) throw DomainError("fidelity above 1");
    return -std::expm1((f - 1.0) / lambda);
}

double exact_batched_probability(double f, double lambda, int m_batch) {
    if (m_batch < 1) throw DomainError("batch size must be at least 1");
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    const double per_execution = (1.0 - f) / (lambda * m_batch);
    if (!(per_execution >= 0.0 && per_execution < 1.0)) {
        throw DomainError("per-execution success probability " + std::to_string(per_execution) +
                          " outside [0, 1)");
    }
    return -std::expm1(m_batch * std::log1p(-per_execution));
}

double approximation_error_bound(double f, double lambda, int m_batch) {
    if (m_batch < 1) throw DomainError("batch size must be at least 1");
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    const double r = (1.0 - f) / lambda;
    if (r < 0.0) throw DomainError("fidelity above 1");
    if (r == 0.0) return 0.0;
    const double inv_y = r / m_batch;
    if (!(inv_y < 1.0)) throw DomainError("bound requires y = M / r > 1");
    return -std::expm1(r * std::log1p(-inv_y));
}

double max_success_probability(double lambda, double f_app) {
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    return -std::expm1((f_app - 1.0) / lambda);
}

ActionSpace build_action_space(const ModelParams& params) {
    validate(params);
    const double q_sup = max_success_probability(params.lambda, params.f_app);
    const double q = params.q.value_or(q_sup);
    const int t_max = max_ttl(params);

    ActionSpace space;
    space.lambda_ = params.lambda;
    space.provenance_ = Provenance::single_click;

    for (int i = 1; i <= t_max; ++i) {
        // Lowest fidelity of the TTL-i band is excluded by the ceiling; step
        // just inside it and widen the step if the snap guard swallows it.
        Action action;
        bool found = false;
        for (double eps = 1e-9; eps <= 1e-5 && !found; eps *= 10.0) {
            const double f_low = 0.25 + (params.f_app - 0.25) * std::exp(params.gamma * (i - 1)) * (1.0 + eps);
            if (!(f_low < 1.0)) break;
            double p = singleclick_probability(f_low, params.lambda);
            const bool capped = params.q.has_value() && p > q;
            if (capped) p = q;
            if (!(p > 0.0)) break;
            const double f = singleclick_fidelity(p, params.lambda);
            if (!(f > params.f_app)) break;
            const int ttl = ttl_of_fidelity(f, params);
            if (ttl == i) {
                action = Action{p, f, ttl};
                found = true;
            } else if (capped || ttl > i) {
                // q lies above the whole band: no probability in (0, q] reaches TTL i.
                break;
            }
        }
        if (found) space.actions_.push_back(action);
    }

    if (space.actions_.empty()) {
        throw InfeasibleError("no action satisfies the trade-off with the given q");
    }
    for (std::size_t k = 1; k < space.actions_.size(); ++k) {
        if (space.actions_[k].ttl != space.actions_[k - 1].ttl + 1) {
            throw InfeasibleError("action TTL range has a gap at " + std::to_string(space.actions_[k - 1].ttl + 1));
        }
    }
    if (space.t_max() < params.n) {
        throw InfeasibleError("n exceeds the largest reachable TTL");
    }
    return space;
}

}  // namespace entpack
