#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "entpack/entpack.hpp"

namespace {

using namespace entpack;
using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kFailure = 1, kInfeasible = 2, kNonConvergence = 3, kStepCap = 4 };

struct CommonFlags {
    std::string regime;
    std::string config;
    int n = 0;
    int n_max = 0;
    std::vector<std::string> methods;
    double tol = 0.0;
    std::int64_t episodes = 0;
    std::uint64_t seed = 0;
    bool reduced = false;
    bool simulate = false;
    std::string out;
};

void add_common(CLI::App& cmd, CommonFlags& f) {
    cmd.add_option("--regime", f.regime, "near-term or far-term");
    cmd.add_option("--config", f.config, "JSON experiment file; flags override its fields");
    cmd.add_option("--n", f.n, "number of links required");
    cmd.add_option("--tol", f.tol, "relative evaluation tolerance");
    cmd.add_option("--episodes", f.episodes, "Monte Carlo episodes");
    cmd.add_option("--seed", f.seed, "master seed");
    cmd.add_flag("--reduced,!--full", f.reduced, "use the viable-reduced state space");
    cmd.add_flag("--simulate", f.simulate, "estimate E[T] by simulation instead of exact evaluation");
}

struct Resolved {
    RunOptions run;
    int n = 2;
    int n_max = 2;
    std::vector<Method> methods;
};

bool given(const CLI::App& cmd, const std::string& name) {
    const CLI::Option* opt = cmd.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

Resolved resolve(const CommonFlags& f, const CLI::App& cmd) {
    Resolved r;
    ExperimentConfig c;
    if (!f.config.empty()) c = read_config(f.config);
    r.run.regime = c.regime.value_or(near_term());
    if (given(cmd, "--regime")) r.run.regime = regime_by_name(f.regime);
    r.n = given(cmd, "--n") ? f.n : c.n.value_or(2);
    r.n_max = given(cmd, "--n-max") ? f.n_max : c.n_max.value_or(r.n);
    if (given(cmd, "--tol")) r.run.eval.tol = f.tol;
    else if (c.tol) r.run.eval.tol = *c.tol;
    if (given(cmd, "--episodes")) r.run.episodes = f.episodes;
    else if (c.episodes) r.run.episodes = *c.episodes;
    if (given(cmd, "--seed")) r.run.seed = f.seed;
    else if (c.seed) r.run.seed = *c.seed;
    r.run.reduced = given(cmd, "--reduced") ? f.reduced : c.reduced.value_or(false);
    r.run.simulate = given(cmd, "--simulate") ? f.simulate : c.simulate.value_or(false);
    r.run.heuristic.simulation_episodes = r.run.episodes;
    if (!f.methods.empty()) {
        for (const auto& m : f.methods) r.methods.push_back(parse_method(m));
    } else if (c.methods) {
        r.methods = *c.methods;
    }
    return r;
}

json sim_json(const SimResult& s) {
    json j;
    j["episodes"] = s.episodes;
    j["mean"] = s.mean;
    j["std_error"] = s.std_error;
    j["ci3"] = s.ci3;
    j["seed"] = s.seed;
    j["generator"] = s.generator;
    if (!s.histogram.empty()) {
        json h = json::object();
        for (const auto& [t, count] : s.histogram) h[std::to_string(t)] = count;
        j["histogram"] = std::move(h);
    }
    return j;
}

int report_error(const std::exception& e) {
    int code = kFailure;
    json j;
    j["error"] = error_tag(e);
    j["message"] = e.what();
    if (const auto* nc = dynamic_cast<const NonConvergenceError*>(&e)) {
        code = kNonConvergence;
        j["residual"] = nc->residual();
        j["iterations"] = nc->iterations();
    } else if (const auto* sc = dynamic_cast<const StepCapError*>(&e)) {
        code = kStepCap;
        j["completed_episodes"] = sc->completed_episodes();
    } else if (dynamic_cast<const InfeasibleError*>(&e)) {
        code = kInfeasible;
    }
    std::cerr << j.dump() << '\n';
    return code;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement packet generation: optimal policies, heuristics and simulation"};
    app.require_subcommand(1);
    CommonFlags solve_flags;
    std::string solve_method = "policy-iteration";
    auto* solve = app.add_subcommand("solve", "solve one instance and write its policy file");
    add_common(*solve, solve_flags);
    solve->add_option("--method", solve_method, "policy-iteration, heuristic, best-constant, random or analytic-n2");
    solve->add_option("--out", solve_flags.out, "policy file to write");

    CommonFlags sweep_flags;
    std::string ratio_out;
    bool sweep_append = false;
    auto* sweep = app.add_subcommand("sweep", "evaluate methods over a range of n and write a results CSV");
    add_common(*sweep, sweep_flags);
    sweep->add_option("--n-max", sweep_flags.n_max, "largest n (inclusive)");
    sweep->add_option("--method", sweep_flags.methods, "methods to run (repeatable); default: all but analytic-n2");
    sweep->add_option("--out", sweep_flags.out, "results CSV")->required();
    sweep->add_option("--ratio-out", ratio_out, "ratio CSV (default: <out stem>_ratios.csv)");
    sweep->add_flag("--append", sweep_append, "append to existing CSVs instead of replacing them");

    std::string heat_policy;
    std::string heat_out;
    std::string heat_aggregation = "reduced";
    auto* heat = app.add_subcommand("heatmap", "aggregate a deterministic policy into heat-map cells");
    heat->add_option("--policy", heat_policy, "policy file")->required();
    heat->add_option("--out", heat_out, "heat-map CSV")->required();
    heat->add_option("--aggregation", heat_aggregation, "reduced (default) or full");

    int count_n = 0;
    int count_t_max = 0;
    auto* count = app.add_subcommand("count", "state-space sizes for (n, t_max)");
    count->add_option("--n", count_n, "number of links")->required();
    count->add_option("--t-max", count_t_max, "maximum TTL")->required();

    std::string sim_policy;
    std::int64_t sim_episodes = 1'000'000;
    std::uint64_t sim_seed = 1;
    std::string sim_csv;
    bool sim_histogram = false;
    auto* simulate = app.add_subcommand("simulate", "estimate E[T] of a policy file by Monte Carlo");
    simulate->add_option("--policy", sim_policy, "policy file")->required();
    simulate->add_option("--episodes", sim_episodes, "episodes (>= 2)");
    simulate->add_option("--seed", sim_seed, "master seed");
    simulate->add_option("--out", sim_csv, "results CSV to append a row to");
    simulate->add_flag("--histogram", sim_histogram, "include completion-time counts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) {
            Resolved r = resolve(solve_flags, *solve);
            const Method method = parse_method(solve_method);
            const SolveOutcome out = entpack::solve(r.n, method, r.run);
            json j;
            j["n"] = out.n;
            j["regime"] = r.run.regime.name;
            j["method"] = to_string(method);
            j["expected_T"] = out.expected_time;
            j["evaluation_kind"] = out.evaluation_kind();
            j["std_error"] = out.std_error ? json(*out.std_error) : json(nullptr);
            j["episodes"] = out.episodes;
            j["seed"] = out.seed;
            j["states"] = out.table->num_states();
            j["actions"] = out.table->num_actions();
            j["reduced"] = r.run.reduced;
            if (out.empty_action) j["empty_action_ttl"] = out.table->actions()[*out.empty_action].ttl;
            if (!solve_flags.out.empty()) {
                write_policy_file(solve_flags.out, make_policy_file(out, r.run), out.table->space());
                j["policy_file"] = solve_flags.out;
            }
            std::cout << j.dump() << '\n';
        } else if (*sweep) {
            Resolved r = resolve(sweep_flags, *sweep);
            if (r.methods.empty()) r.methods = all_methods();
            const SweepResult result = run_sweep(r.n, r.n_max, r.methods, r.run);
            if (ratio_out.empty()) {
                std::filesystem::path p(sweep_flags.out);
                ratio_out = (p.parent_path() / (p.stem().string() + "_ratios.csv")).string();
            }
            if (!sweep_append) {
                std::filesystem::remove(sweep_flags.out);
                std::filesystem::remove(ratio_out);
            }
            append_csv(sweep_flags.out, kSweepHeader, sweep_to_csv(result.rows));
            append_csv(ratio_out, kRatioHeader, ratios_to_csv(result.ratios));
            std::size_t failed = 0;
            for (const SweepRow& row : result.rows) {
                if (row.error.empty()) continue;
                ++failed;
                json e;
                e["n"] = row.n;
                e["method"] = to_string(row.method);
                e["error"] = row.error;
                e["message"] = row.message;
                std::cerr << e.dump() << '\n';
            }
            json j;
            j["rows"] = result.rows.size();
            j["failed"] = failed;
            j["out"] = sweep_flags.out;
            j["ratio_out"] = ratio_out;
            std::cout << j.dump() << '\n';
        } else if (*heat) {
            const PolicyFile file = read_policy_file(heat_policy);
            const HeatmapAggregation aggregation = parse_heatmap_aggregation(heat_aggregation);
            auto space = std::make_shared<const StateSpace>(file.space());
            const TransitionTable table = TransitionTable::build(space, file.action_space());
            const auto cells = build_heatmap(file.policy, table, aggregation);
            write_text(heat_out, heatmap_to_csv(cells));
            json meta;
            meta["policy_file"] = heat_policy;
            meta["regime"] = file.meta.regime;
            meta["n"] = file.meta.n;
            meta["t_max"] = file.meta.t_max;
            meta["method"] = file.meta.method;
            meta["aggregation"] = to_string(aggregation);
            meta["weighting"] = "unweighted count of distinct states";
            meta["modal_tie_break"] = "larger TTL";
            meta["accessible"] = "some state in the cell is reachable from the empty state under some action sequence";
            meta["zero_viable_cell"] = "min_viable_ttl = 0";
            write_text(heat_out + ".meta.json", meta.dump(2) + "\n");
            json j;
            j["cells"] = cells.size();
            j["out"] = heat_out;
            std::cout << j.dump() << '\n';
        } else if (*count) {
            std::cout << count_record_json(count_record(count_n, count_t_max)) << '\n';
        } else if (*simulate) {
            const PolicyFile file = read_policy_file(sim_policy);
            const StateSpace space = file.space();
            const ActionSpace actions = file.action_space();
            const TablePolicy sampler(file.policy, space.indexer());
            SimOptions options;
            options.keep_histogram = sim_histogram;
            const SimResult s = estimate(sampler, actions, file.meta.n, sim_episodes, sim_seed, options);
            json j = sim_json(s);
            j["n"] = file.meta.n;
            j["method"] = file.meta.method;
            std::cout << j.dump() << '\n';
            if (!sim_csv.empty()) {
                SweepRow row;
                row.n = file.meta.n;
                row.method = parse_method(file.meta.method);
                row.expected_time = s.mean;
                row.evaluation_kind = "simulated";
                row.std_error = s.std_error;
                row.episodes = s.episodes;
                row.seed = s.seed;
                append_csv(sim_csv, kSweepHeader, sweep_row_csv(row) + "\n");
            }
        }
    } catch (const std::exception& e) {
        return report_error(e);
    }
    return kOk;
}
