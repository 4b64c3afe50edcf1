#include "entpack/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "entpack/actions.hpp"
#include "entpack/error.hpp"
#include "entpack/montecarlo.hpp"

namespace entpack {

namespace {

struct MethodName {
    Method method;
    const char* name;
};

constexpr MethodName kMethodNames[] = {
    {Method::policy_iteration, "policy-iteration"},
    {Method::heuristic, "heuristic"},
    {Method::best_constant, "best-constant"},
    {Method::random, "random"},
    {Method::analytic_n2, "analytic-n2"},
};

void measure(SolveOutcome& out, const RunOptions& options) {
    const TransitionTable& table = *out.table;
    out.seed = options.seed;
    if (options.simulate) {
        const TablePolicy sampler(out.policy, table.space().indexer());
        const SimResult sim =
            estimate(sampler, table.actions(), table.space().n(), options.episodes, options.seed, options.sim);
        out.simulated = true;
        out.expected_time = sim.mean;
        out.std_error = sim.std_error;
        out.episodes = sim.episodes;
        return;
    }
    if (!out.values) out.values = evaluate_policy(out.policy, table, options.eval);
    out.expected_time = out.values->empty_state();
}

}  // namespace

const char* to_string(Method method) noexcept {
    for (const auto& entry : kMethodNames) {
        if (entry.method == method) return entry.name;
    }
    return "unknown";
}

Method parse_method(std::string_view text) {
    for (const auto& entry : kMethodNames) {
        if (text == entry.name) return entry.method;
    }
    throw DomainError("unknown method '" + std::string(text) +
                      "' (expected policy-iteration, heuristic, best-constant, random or analytic-n2)");
}

std::vector<Method> all_methods() {
    return {Method::policy_iteration, Method::heuristic, Method::best_constant, Method::random};
}

std::shared_ptr<const TransitionTable> build_table(const RegimePreset& regime, int n, bool reduced) {
    const ModelParams params = regime.params(n);
    ActionSpace actions = build_action_space(params);
    auto space = std::make_shared<const StateSpace>(StateSpace::enumerate(n, actions.t_max(), reduced));
    return std::make_shared<const TransitionTable>(TransitionTable::build(std::move(space), std::move(actions)));
}

SolveOutcome solve(std::shared_ptr<const TransitionTable> table, Method method, const RunOptions& options) {
    SolveOutcome out;
    out.method = method;
    out.table = std::move(table);
    const TransitionTable& t = *out.table;
    out.n = t.space().n();

    switch (method) {
        case Method::policy_iteration: {
            PolicyIterationResult pi = policy_iteration(t, options.eval);
            out.policy = std::move(pi.policy);
            out.values = std::move(pi.values);
            out.iterations = pi.iterations;
            break;
        }
        case Method::heuristic: {
            HeuristicOptions h = options.heuristic;
            h.eval = options.eval;
            h.seed = options.seed;
            HeuristicResult r = select_heuristic(t, h);
            out.policy = std::move(r.policy);
            out.empty_action = r.empty_action;
            if (r.values) out.values = std::move(r.values);
            break;
        }
        case Method::best_constant: {
            BestConstant c = best_constant(t, options.eval);
            out.policy = constant_policy(t.num_states(), c.action, t.num_actions());
            out.values = std::move(c.values);
            out.empty_action = c.action;
            break;
        }
        case Method::random:
            out.policy = random_policy(t.num_states(), t.num_actions());
            break;
        case Method::analytic_n2: {
            AnalyticN2 a = analytic_n2(t.space(), t.actions());
            out.policy = std::move(a.policy);
            out.empty_action = a.empty_action;
            out.empty_action_tie = a.tie;
            if (!options.simulate) {
                out.expected_time = a.expected_time;
                out.seed = options.seed;
                return out;
            }
            break;
        }
    }
    if (options.simulate) out.values.reset();
    measure(out, options);
    return out;
}

SolveOutcome solve(int n, Method method, const RunOptions& options) {
    return solve(build_table(options.regime, n, options.reduced), method, options);
}

PolicyFile make_policy_file(const SolveOutcome& outcome, const RunOptions& options) {
    const TransitionTable& t = *outcome.table;
    PolicyFile file;
    PolicyMeta& m = file.meta;
    m.regime = options.regime.name;
    m.gamma = options.regime.gamma;
    m.lambda = options.regime.lambda;
    m.f_app = options.regime.f_app;
    m.q = options.regime.q;
    m.n = t.space().n();
    m.t_max = t.space().t_max();
    m.reduced = t.space().reduced();
    m.method = to_string(outcome.method);
    m.tol = options.eval.tol;
    m.seed = outcome.seed;
    m.actions = t.actions().actions();
    m.expected_time = outcome.expected_time;
    m.evaluation_kind = outcome.evaluation_kind();
    m.empty_action = outcome.empty_action;
    m.empty_action_tie = outcome.empty_action_tie;
    file.policy = outcome.policy;
    return file;
}

std::string error_tag(const std::exception& e) {
    if (dynamic_cast<const InfeasibleError*>(&e)) return "infeasible";
    if (dynamic_cast<const NonConvergenceError*>(&e)) return "non_convergence";
    if (dynamic_cast<const StepCapError*>(&e)) return "step_cap";
    if (dynamic_cast<const OverflowError*>(&e)) return "overflow";
    return "error";
}

SweepResult run_sweep(int n_min, int n_max, const std::vector<Method>& methods, const RunOptions& options) {
    if (n_min > n_max) throw DomainError("empty n range");
    SweepResult result;
    for (int n = n_min; n <= n_max; ++n) {
        std::shared_ptr<const TransitionTable> table;
        std::string table_error;
        std::string table_message;
        try {
            table = build_table(options.regime, n, options.reduced);
        } catch (const Error& e) {
            table_error = error_tag(e);
            table_message = e.what();
        }
        std::optional<double> optimal;
        std::vector<std::pair<Method, double>> done;
        for (Method method : methods) {
            SweepRow row;
            row.n = n;
            row.method = method;
            row.seed = options.seed;
            row.evaluation_kind = options.simulate ? "simulated" : "exact";
            if (!table) {
                row.error = table_error;
                row.message = table_message;
                result.rows.push_back(std::move(row));
                continue;
            }
            try {
                const SolveOutcome out = solve(table, method, options);
                row.expected_time = out.expected_time;
                row.evaluation_kind = out.evaluation_kind();
                row.std_error = out.std_error;
                row.episodes = out.episodes;
                if (method == Method::policy_iteration && !out.simulated) optimal = out.expected_time;
                done.emplace_back(method, out.expected_time);
            } catch (const Error& e) {
                row.error = error_tag(e);
                row.message = e.what();
            }
            result.rows.push_back(std::move(row));
        }
        if (optimal) {
            for (const auto& [method, value] : done) result.ratios.push_back({n, method, value / *optimal});
        }
    }
    return result;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string sweep_row_csv(const SweepRow& row) {
    std::ostringstream out;
    out << row.n << ',' << to_string(row.method) << ',';
    if (row.expected_time) out << format_number(*row.expected_time);
    out << ',' << row.evaluation_kind << ',';
    if (row.std_error) out << format_number(*row.std_error);
    out << ',' << row.episodes << ',' << row.seed << ',' << row.error;
    return out.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out;
    for (const SweepRow& row : rows) out += sweep_row_csv(row) + '\n';
    return out;
}

std::string ratios_to_csv(const std::vector<RatioRow>& rows) {
    std::string out;
    for (const RatioRow& row : rows) {
        out += std::to_string(row.n) + ',' + to_string(row.method) + ',' + format_number(row.ratio_to_optimal) + '\n';
    }
    return out;
}

void append_csv(const std::filesystem::path& path, std::string_view header, std::string_view body_lines) {
    bool write_header = true;
    {
        std::ifstream in(path);
        std::string first;
        if (in && std::getline(in, first)) {
            if (first != header) {
                throw DomainError(path.string() + " has header '" + first + "', expected '" + std::string(header) + "'");
            }
            write_header = false;
        }
    }
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    if (write_header) out << header << '\n';
    out << body_lines;
}

CountRecord count_record(int n, int t_max, Count enumeration_limit) {
    if (n < 2 || n > t_max) {
        throw InfeasibleError("counting needs 2 <= n <= t_max, got n = " + std::to_string(n) +
                              ", t_max = " + std::to_string(t_max));
    }
    CountRecord r;
    r.n = n;
    r.t_max = t_max;
    r.full = count_states(n, t_max);
    r.reduced = count_reduced(n, t_max);
    r.lower_bound = state_count_lower_bound(n, t_max);
    if (r.full > enumeration_limit) {
        r.enumeration_skipped = true;
        return r;
    }
    r.enumeration_verified = StateSpace::enumerate(n, t_max, false).size() == r.full &&
                             StateSpace::enumerate(n, t_max, true).size() == r.reduced;
    return r;
}

std::string count_record_json(const CountRecord& r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["t_max"] = r.t_max;
    j["full"] = r.full;
    j["reduced"] = r.reduced;
    j["lower_bound"] = r.lower_bound;
    j["enumeration_verified"] = r.enumeration_verified;
    j["enumeration_skipped"] = r.enumeration_skipped;
    return j.dump();
}

ExperimentConfig parse_config(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("config must be a JSON object");
    static const char* const known[] = {"regime", "n",  "n_max",   "methods", "tol",
                                        "episodes", "seed", "reduced", "simulate"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw DomainError("unknown config key '" + key + "'");
        }
    }
    ExperimentConfig c;
    try {
        if (j.contains("regime")) {
            const auto& r = j["regime"];
            if (r.is_string()) {
                c.regime = regime_by_name(r.get<std::string>());
            } else if (r.contains("gamma")) {
                c.regime = custom_rates(r.at("gamma").get<double>(), r.at("lambda").get<double>(),
                                        r.value("f_app", 0.5));
            } else {
                c.regime = custom_regime(r.at("N").get<double>(), r.at("p_det").get<double>(),
                                         r.at("M").get<int>(), r.value("f_app", 0.5));
            }
            if (r.is_object() && r.contains("q") && !r["q"].is_null()) c.regime->q = r["q"].get<double>();
        }
        if (j.contains("n")) c.n = j["n"].get<int>();
        if (j.contains("n_max")) c.n_max = j["n_max"].get<int>();
        if (j.contains("methods")) {
            std::vector<Method> methods;
            for (const auto& m : j["methods"]) methods.push_back(parse_method(m.get<std::string>()));
            c.methods = std::move(methods);
        }
        if (j.contains("tol")) c.tol = j["tol"].get<double>();
        if (j.contains("episodes")) c.episodes = j["episodes"].get<std::int64_t>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("reduced")) c.reduced = j["reduced"].get<bool>();
        if (j.contains("simulate")) c.simulate = j["simulate"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed config: ") + e.what());
    }
    return c;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace entpack
