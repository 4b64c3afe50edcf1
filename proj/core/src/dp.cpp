#include "entpack/dp.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "entpack/error.hpp"
#include "entpack/parallel.hpp"

namespace entpack {

Policy Policy::deterministic(std::vector<std::int32_t> actions, std::size_t num_actions) {
    for (auto a : actions) {
        if (a < 0 || static_cast<std::size_t>(a) >= num_actions) {
            throw ContractViolation("policy action id " + std::to_string(a) + " out of range");
        }
    }
    Policy p;
    p.kind_ = Kind::deterministic;
    p.size_ = actions.size();
    p.num_actions_ = num_actions;
    p.actions_ = std::move(actions);
    return p;
}

Policy Policy::stochastic(std::vector<double> probabilities, std::size_t num_actions) {
    if (num_actions == 0 || probabilities.size() % num_actions != 0) {
        throw ContractViolation("stochastic policy rows must have num_actions entries");
    }
    const std::size_t states = probabilities.size() / num_actions;
    for (std::size_t s = 0; s < states; ++s) {
        double sum = 0.0;
        for (std::size_t a = 0; a < num_actions; ++a) {
            const double v = probabilities[s * num_actions + a];
            if (!(v >= 0.0)) throw ContractViolation("negative action probability");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw ContractViolation("policy row " + std::to_string(s) + " sums to " + std::to_string(sum));
        }
    }
    Policy p;
    p.kind_ = Kind::stochastic;
    p.size_ = states;
    p.num_actions_ = num_actions;
    p.probabilities_ = std::move(probabilities);
    return p;
}

std::int32_t Policy::action(std::size_t state) const {
    if (kind_ != Kind::deterministic) throw ContractViolation("action() on a stochastic policy");
    return actions_.at(state);
}

std::span<const double> Policy::distribution(std::size_t state) const {
    if (kind_ != Kind::stochastic) throw ContractViolation("distribution() on a deterministic policy");
    if (state >= size_) throw ContractViolation("state id out of range");
    return {probabilities_.data() + state * num_actions_, num_actions_};
}

double Policy::probability(std::size_t state, std::size_t action) const {
    if (kind_ == Kind::deterministic) {
        return actions_.at(state) == static_cast<std::int32_t>(action) ? 1.0 : 0.0;
    }
    return distribution(state)[action];
}

double expected_next_value(const TransitionTable& table, std::size_t state, std::size_t action,
                           std::span<const double> w) noexcept {
    double sum = 0.0;
    for (const Branch& b : table.row(state, action)) {
        if (!b.terminal()) sum += b.probability * w[static_cast<std::size_t>(b.next)];
    }
    return sum;
}

namespace {

void check_shapes(const Policy& policy, const TransitionTable& table) {
    if (policy.size() != table.num_states() || policy.num_actions() != table.num_actions()) {
        throw ContractViolation("policy shape does not match the transition table");
    }
}

// 1 + sum_a pi(a|s) E[w(s') | s, a]
double bellman_update(const Policy& policy, const TransitionTable& table, std::size_t s,
                      std::span<const double> w) noexcept {
    if (policy.is_deterministic()) {
        return 1.0 + expected_next_value(table, s, static_cast<std::size_t>(policy.actions()[s]), w);
    }
    double acc = 0.0;
    const auto dist = policy.distribution(s);
    for (std::size_t a = 0; a < dist.size(); ++a) {
        if (dist[a] > 0.0) acc += dist[a] * expected_next_value(table, s, a, w);
    }
    return 1.0 + acc;
}

double sup_norm(std::span<const double> w) {
    double m = 0.0;
    for (double v : w) m = std::max(m, std::abs(v));
    return m;
}

constexpr std::size_t kSweepChunks = 64;

ValueTable solve_iterative(const Policy& policy, const TransitionTable& table, const EvalOptions& options,
                           bool gauss_seidel) {
    const std::size_t n = table.num_states();
    std::vector<double> w(n, 0.0);
    std::vector<double> next(n, 0.0);
    std::vector<double> chunk_delta(kSweepChunks);
    std::vector<double> chunk_norm(kSweepChunks);
    const int workers = resolve_workers(options.workers);

    double delta = std::numeric_limits<double>::infinity();
    std::int64_t it = 0;
    while (it < options.max_iters) {
        ++it;
        double scale = 1.0;
        if (gauss_seidel) {
            delta = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                const double v = bellman_update(policy, table, s, w);
                delta = std::max(delta, std::abs(v - w[s]));
                w[s] = v;
                scale = std::max(scale, std::abs(v));
            }
        } else {
            parallel_chunks(n, kSweepChunks, workers, [&](std::size_t lo, std::size_t hi, std::size_t c) {
                double d = 0.0;
                double m = 0.0;
                for (std::size_t s = lo; s < hi; ++s) {
                    const double v = bellman_update(policy, table, s, w);
                    d = std::max(d, std::abs(v - w[s]));
                    m = std::max(m, std::abs(v));
                    next[s] = v;
                }
                chunk_delta[c] = d;
                chunk_norm[c] = m;
            });
            delta = *std::max_element(chunk_delta.begin(), chunk_delta.end());
            scale = std::max(1.0, *std::max_element(chunk_norm.begin(), chunk_norm.end()));
            w.swap(next);
        }
        if (delta / scale < options.tol) break;
    }

    ValueTable out;
    out.iterations = it;
    out.method = gauss_seidel ? EvalMethod::gauss_seidel : EvalMethod::jacobi;
    out.residual = policy_residual(policy, table, w);
    out.w = std::move(w);
    if (!(delta / std::max(1.0, sup_norm(out.w)) < options.tol)) {
        throw NonConvergenceError("policy evaluation hit max_iters = " + std::to_string(options.max_iters) +
                                      " with relative update " + std::to_string(delta / std::max(1.0, sup_norm(out.w))),
                                  out.residual, it);
    }
    return out;
}

ValueTable solve_direct(const Policy& policy, const TransitionTable& table, const EvalOptions& options) {
    using SpMat = Eigen::SparseMatrix<double>;
    const auto n = static_cast<Eigen::Index>(table.num_states());

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n) * 3);
    for (Eigen::Index s = 0; s < n; ++s) {
        const auto su = static_cast<std::size_t>(s);
        triplets.emplace_back(s, s, 1.0);
        for (std::size_t a = 0; a < table.num_actions(); ++a) {
            const double pa = policy.probability(su, a);
            if (pa <= 0.0) continue;
            for (const Branch& b : table.row(su, a)) {
                if (!b.terminal()) triplets.emplace_back(s, b.next, -pa * b.probability);
            }
        }
    }
    SpMat system(n, n);
    system.setFromTriplets(triplets.begin(), triplets.end());
    system.makeCompressed();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(system);
    lu.factorize(system);
    if (lu.info() != Eigen::Success) {
        throw NonConvergenceError("sparse factorization failed: " + lu.lastErrorMessage(),
                                  std::numeric_limits<double>::infinity(), 0);
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd x = lu.solve(ones);

    // Iterative refinement; the system's conditioning grows with E[T].
    std::int64_t refinements = 0;
    for (; refinements < 3; ++refinements) {
        const Eigen::VectorXd r = ones - system * x;
        const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
        if (!(r.cwiseAbs().maxCoeff() / scale > options.tol * 1e-3)) break;
        x += lu.solve(r);
    }

    ValueTable out;
    out.w.assign(x.data(), x.data() + n);
    out.iterations = refinements;
    out.method = EvalMethod::direct;
    out.residual = policy_residual(policy, table, out.w);
    const bool finite = std::all_of(out.w.begin(), out.w.end(), [](double v) { return std::isfinite(v); });
    if (!finite || !(out.residual <= options.tol)) {
        throw NonConvergenceError("direct solve residual " + std::to_string(out.residual) +
                                      " exceeds tolerance",
                                  out.residual, refinements);
    }
    return out;
}

}  // namespace

double policy_residual(const Policy& policy, const TransitionTable& table, std::span<const double> w) {
    check_shapes(policy, table);
    double worst = 0.0;
    for (std::size_t s = 0; s < table.num_states(); ++s) {
        worst = std::max(worst, std::abs(bellman_update(policy, table, s, w) - w[s]));
    }
    return worst / std::max(1.0, sup_norm(w));
}

std::vector<bool> completing_states(const Policy& policy, const TransitionTable& table) {
    check_shapes(policy, table);
    const std::size_t n = table.num_states();
    // Reverse adjacency in CSR form.
    std::vector<std::size_t> in_degree(n + 1, 0);
    std::vector<bool> done(n, false);
    std::deque<std::size_t> frontier;
    auto for_each_edge = [&](auto&& visit) {
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t a = 0; a < table.num_actions(); ++a) {
                if (policy.probability(s, a) <= 0.0) continue;
                for (const Branch& b : table.row(s, a)) {
                    if (b.probability > 0.0) visit(s, b);
                }
            }
        }
    };
    for_each_edge([&](std::size_t s, const Branch& b) {
        if (b.terminal()) {
            if (!done[s]) {
                done[s] = true;
                frontier.push_back(s);
            }
        } else {
            ++in_degree[static_cast<std::size_t>(b.next) + 1];
        }
    });
    for (std::size_t i = 0; i < n; ++i) in_degree[i + 1] += in_degree[i];
    std::vector<std::size_t> sources(in_degree[n]);
    std::vector<std::size_t> fill(in_degree.begin(), in_degree.end() - 1);
    for_each_edge([&](std::size_t s, const Branch& b) {
        if (!b.terminal()) sources[fill[static_cast<std::size_t>(b.next)]++] = s;
    });

    while (!frontier.empty()) {
        const std::size_t t = frontier.front();
        frontier.pop_front();
        for (std::size_t k = in_degree[t]; k < in_degree[t + 1]; ++k) {
            const std::size_t s = sources[k];
            if (!done[s]) {
                done[s] = true;
                frontier.push_back(s);
            }
        }
    }
    return done;
}

ValueTable evaluate_policy(const Policy& policy, const TransitionTable& table, const EvalOptions& options) {
    check_shapes(policy, table);
    if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");

    const auto completes = completing_states(policy, table);
    const auto stuck = std::count(completes.begin(), completes.end(), false);
    if (stuck > 0) {
        const auto first = static_cast<std::size_t>(std::find(completes.begin(), completes.end(), false) - completes.begin());
        throw NonConvergenceError("policy never completes from " + std::to_string(stuck) + " of " +
                                      std::to_string(completes.size()) + " states (e.g. {" +
                                      table.space().state(first).key() + "}); E[T] is infinite",
                                  std::numeric_limits<double>::infinity(), 0);
    }

    switch (options.method) {
        case EvalMethod::jacobi:
            return solve_iterative(policy, table, options, false);
        case EvalMethod::gauss_seidel:
            return solve_iterative(policy, table, options, true);
        case EvalMethod::direct:
            return solve_direct(policy, table, options);
        case EvalMethod::automatic:
            break;
    }
    if (table.num_states() <= options.direct_limit) return solve_direct(policy, table, options);
    return solve_iterative(policy, table, options, false);
}

Policy default_initial_policy(const TransitionTable& table) {
    const int n = table.space().n();
    std::size_t a = table.actions().best_action_with_ttl_at_least(n);
    if (a == table.num_actions()) a = table.actions().max_probability_action();
    return Policy::deterministic(std::vector<std::int32_t>(table.num_states(), static_cast<std::int32_t>(a)),
                                 table.num_actions());
}

PolicyIterationResult policy_iteration(const TransitionTable& table, const EvalOptions& options,
                                       std::optional<Policy> initial, int max_rounds) {
    Policy policy = initial ? std::move(*initial) : default_initial_policy(table);
    if (!policy.is_deterministic()) throw ContractViolation("policy iteration needs a deterministic start");
    check_shapes(policy, table);

    PolicyIterationResult result;
    std::vector<double> previous;
    const std::size_t n = table.num_states();
    const std::size_t actions = table.num_actions();

    for (int round = 0; round < max_rounds; ++round) {
        ValueTable values = evaluate_policy(policy, table, options);
        result.empty_state_history.push_back(values.empty_state());
        if (!previous.empty()) {
            const double scale = std::max(1.0, sup_norm(previous));
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s < n; ++s) worst = std::max(worst, values.w[s] - previous[s]);
            result.max_relative_increase.push_back(worst / scale);
        }

        const double margin = options.tol * std::max(1.0, sup_norm(values.w));
        std::vector<std::int32_t> improved = policy.actions();
        bool changed = false;
        std::vector<double> q(actions);
        for (std::size_t s = 0; s < n; ++s) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < actions; ++a) {
                q[a] = expected_next_value(table, s, a, values.w);
                best = std::min(best, q[a]);
            }
            const auto current = static_cast<std::size_t>(improved[s]);
            if (q[current] <= best + margin) continue;
            for (std::size_t a = 0; a < actions; ++a) {
                if (q[a] <= best + margin) {
                    improved[s] = static_cast<std::int32_t>(a);
                    break;
                }
            }
            changed = true;
        }

        result.iterations = round + 1;
        previous = values.w;
        if (!changed) {
            result.policy = std::move(policy);
            result.values = std::move(values);
            return result;
        }
        policy = Policy::deterministic(std::move(improved), actions);
    }
    throw NonConvergenceError("policy iteration did not stabilize within " + std::to_string(max_rounds) + " rounds",
                              std::numeric_limits<double>::infinity(), max_rounds);
}

double optimality_certificate(std::span<const double> w, const TransitionTable& table) {
    if (w.size() != table.num_states()) throw ContractViolation("value table size mismatch");
    double worst = 0.0;
    for (std::size_t s = 0; s < table.num_states(); ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < table.num_actions(); ++a) {
            best = std::min(best, expected_next_value(table, s, a, w));
        }
        worst = std::max(worst, std::abs(w[s] - (1.0 + best)));
    }
    return worst / std::max(1.0, sup_norm(w));
}

}  // namespace entpack
