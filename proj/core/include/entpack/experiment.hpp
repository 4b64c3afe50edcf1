#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entpack/dp.hpp"
#include "entpack/policies.hpp"
#include "entpack/policy_io.hpp"
#include "entpack/presets.hpp"
#include "entpack/statespace.hpp"

namespace entpack {

enum class Method { policy_iteration, heuristic, best_constant, random, analytic_n2 };

const char* to_string(Method method) noexcept;
Method parse_method(std::string_view text);
std::vector<Method> all_methods();

struct RunOptions {
    RegimePreset regime = near_term();
    bool reduced = false;
    EvalOptions eval;
    /// Estimate w(empty) by simulation instead of exact evaluation.
    bool simulate = false;
    std::int64_t episodes = 1'000'000;
    std::uint64_t seed = 1;
    HeuristicOptions heuristic;
    SimOptions sim;
};

struct SolveOutcome {
    Method method = Method::policy_iteration;
    int n = 0;
    std::shared_ptr<const TransitionTable> table;
    Policy policy;
    /// Exact values when evaluated exactly.
    std::optional<ValueTable> values;
    double expected_time = 0.0;
    bool simulated = false;
    std::optional<double> std_error;
    std::int64_t episodes = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> empty_action;
    bool empty_action_tie = false;
    int iterations = 0;

    const char* evaluation_kind() const noexcept { return simulated ? "simulated" : "exact"; }
};

/// Builds the action space, state space and transition table for (regime, n).
/// Throws InfeasibleError when n exceeds the regime's maximum TTL.
std::shared_ptr<const TransitionTable> build_table(const RegimePreset& regime, int n, bool reduced);

/// Constructs the method's policy and measures w(empty), exactly or by simulation.
SolveOutcome solve(std::shared_ptr<const TransitionTable> table, Method method, const RunOptions& options);
SolveOutcome solve(int n, Method method, const RunOptions& options);

/// Policy file contents describing a solved instance.
PolicyFile make_policy_file(const SolveOutcome& outcome, const RunOptions& options);

/// One line of the sweep table. `error` is empty on success and otherwise one of
/// infeasible, non_convergence, step_cap, overflow, error.
struct SweepRow {
    int n = 0;
    Method method = Method::policy_iteration;
    std::optional<double> expected_time;
    std::string evaluation_kind;
    std::optional<double> std_error;
    std::int64_t episodes = 0;
    std::uint64_t seed = 0;
    std::string error;
    std::string message;
};

struct RatioRow {
    int n = 0;
    Method method = Method::policy_iteration;
    double ratio_to_optimal = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// w_method / w_optimal for every n whose policy-iteration cell succeeded.
    std::vector<RatioRow> ratios;
};

/// Runs every (n, method) cell for n in [n_min, n_max]; failures become tagged rows.
SweepResult run_sweep(int n_min, int n_max, const std::vector<Method>& methods, const RunOptions& options);

inline constexpr const char* kSweepHeader = "n,method,expected_T,evaluation_kind,std_error,episodes,seed,error";
inline constexpr const char* kRatioHeader = "n,method,ratio_to_optimal";

/// Numbers use 17 significant digits; missing values are empty fields.
std::string format_number(double value);
std::string sweep_row_csv(const SweepRow& row);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string ratios_to_csv(const std::vector<RatioRow>& rows);

/// Appends data lines below `header`, writing the header only when the file is new or empty.
/// Throws DomainError if an existing file starts with a different header.
void append_csv(const std::filesystem::path& path, std::string_view header, std::string_view body_lines);

/// Error tag for the current exception inside a catch block.
std::string error_tag(const std::exception& e);

struct CountRecord {
    int n = 0;
    int t_max = 0;
    Count full = 0;
    Count reduced = 0;
    double lower_bound = 0.0;
    /// Enumeration was run and matched both closed forms.
    bool enumeration_verified = false;
    /// Enumeration skipped because the space exceeds `enumeration_limit`.
    bool enumeration_skipped = false;
};

/// Throws InfeasibleError unless 2 <= n <= t_max.
CountRecord count_record(int n, int t_max, Count enumeration_limit = 20'000'000);
std::string count_record_json(const CountRecord& record);

/// Experiment description read from a JSON file. Every field is optional.
///
///   {"regime": "near-term" | "far-term"
///              | {"N": ..., "p_det": ..., "M": ..., "f_app": ...}
///              | {"gamma": ..., "lambda": ..., "f_app": ...},
///    "n": 2, "n_max": 5, "methods": ["policy-iteration", ...],
///    "tol": 1e-10, "episodes": 1000000, "seed": 1, "reduced": false,
///    "simulate": false}
struct ExperimentConfig {
    std::optional<RegimePreset> regime;
    std::optional<int> n;
    std::optional<int> n_max;
    std::optional<std::vector<Method>> methods;
    std::optional<double> tol;
    std::optional<std::int64_t> episodes;
    std::optional<std::uint64_t> seed;
    std::optional<bool> reduced;
    std::optional<bool> simulate;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig read_config(const std::filesystem::path& path);

}  // namespace entpack
